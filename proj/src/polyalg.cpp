#include "lieiso/polyalg.hpp"
#include "lieiso/univariate.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace lieiso {

RankedView ranked_view(const Polynomial& p) {
  if (p.is_constant()) throw std::invalid_argument("ranked_view of a constant polynomial");
  Var v = p.mvar();
  unsigned d = p.degree(v);
  Polynomial init = p.coeff_in(v, d);
  Polynomial tail = p - init.shifted(v, d);
  return {v, d, std::move(init), std::move(tail)};
}

Polynomial init_of(const Polynomial& p) { return p.lcoeff(p.mvar()); }

Polynomial derivative(const Polynomial& p) {
  if (p.is_constant()) throw std::invalid_argument("derivative of a constant polynomial");
  return p.derivative(p.mvar());
}

std::optional<Polynomial> try_divide(const Polynomial& p, const Polynomial& d) {
  if (d.is_zero()) throw std::domain_error("division by zero polynomial");
  if (p.is_zero()) return Polynomial(d.order() ? d.order() : p.order());
  if (d.is_constant()) return p.scaled(1 / d.constant_value());
  if (p.is_constant()) return std::nullopt;
  const std::size_t n = p.nvars();
  // Per-variable degree of the quotient is forced.
  std::vector<unsigned> bound(n);
  for (Var v = 0; v < n; ++v) {
    unsigned dp = p.degree(v), dd = d.degree(v);
    if (dd > dp) return std::nullopt;
    bound[v] = dp - dd;
  }
  Polynomial r = p;
  Polynomial q(p.order());
  std::vector<unsigned> e(n);
  const Rational& lc = d.coeff(0);
  while (!r.is_zero()) {
    for (Var v = 0; v < n; ++v) {
      unsigned a = r.exponent(0, v), b = d.exponent(0, v);
      if (a < b || a - b > bound[v]) return std::nullopt;
      e[v] = a - b;
    }
    Polynomial t = Polynomial::monomial(p.order(), e, r.coeff(0) / lc);
    q += t;
    r -= t * d;
  }
  return q;
}

Polynomial exact_divide(const Polynomial& p, const Polynomial& d) {
  auto q = try_divide(p, d);
  if (!q) throw std::domain_error("inexact polynomial division");
  return std::move(*q);
}

PremResult pseudo_remainder(const Polynomial& p, const Polynomial& t, Var v) {
  const unsigned dt = t.degree(v);
  if (dt == 0) throw std::invalid_argument("pseudo_remainder: divisor is constant in the variable");
  PremResult out{p, 0, Polynomial(p.order())};
  Polynomial init = t.coeff_in(v, dt);
  const bool const_init = init.is_constant();
  Rational inv;
  if (const_init) inv = 1 / init.constant_value();
  unsigned dr = out.r.degree(v);
  while (!out.r.is_zero() && dr >= dt) {
    Polynomial lc = out.r.coeff_in(v, dr);
    if (const_init) {
      Polynomial m = lc.scaled(inv).shifted(v, dr - dt);
      out.r -= m * t;
      out.q += m;
    } else if (auto quo = try_divide(lc, init)) {
      Polynomial m = quo->shifted(v, dr - dt);
      out.r -= m * t;
      out.q += m;
    } else {
      Polynomial m = lc.shifted(v, dr - dt);
      out.r = out.r * init - m * t;
      out.q = out.q * init + m;
      ++out.e;
    }
    dr = out.r.degree(v);
  }
  return out;
}

Polynomial prem(const Polynomial& p, const Polynomial& t, Var v) {
  const unsigned dt = t.degree(v);
  if (dt == 0) throw std::invalid_argument("prem: divisor is constant in the variable");
  Polynomial r = p;
  Polynomial init = t.coeff_in(v, dt);
  const bool const_init = init.is_constant();
  Rational inv;
  if (const_init) inv = 1 / init.constant_value();
  unsigned dr = r.degree(v);
  while (!r.is_zero() && dr >= dt) {
    Polynomial lc = r.coeff_in(v, dr);
    if (const_init) {
      r -= lc.scaled(inv).shifted(v, dr - dt) * t;
    } else if (auto quo = try_divide(lc, init)) {
      r -= quo->shifted(v, dr - dt) * t;
    } else {
      r = r * init - lc.shifted(v, dr - dt) * t;
    }
    dr = r.degree(v);
  }
  return r;
}

Polynomial pquo(const Polynomial& p, const Polynomial& t, Var v) { return pseudo_remainder(p, t, v).q; }

Polynomial prem_full(const Polynomial& p, const Polynomial& t, Var v) {
  const unsigned dt = t.degree(v);
  if (dt == 0) throw std::invalid_argument("prem: divisor is constant in the variable");
  unsigned dp = p.degree(v);
  if (p.is_zero() || dp < dt) return p;
  Polynomial init = t.coeff_in(v, dt);
  Polynomial r = p;
  for (unsigned k = dp + 1; k-- > dt;) {
    Polynomial c = r.coeff_in(v, k);
    r = r * init - c.shifted(v, k - dt) * t;
  }
  return r;
}

namespace {

Polynomial pow_sign(Polynomial p, unsigned long long exponent_parity) {
  return (exponent_parity & 1ULL) ? -p : p;
}

// Subresultant chain for deg A > deg B >= 1 (after the caller's checks).
std::vector<Polynomial> ducos(const Polynomial& P, const Polynomial& Q, Var v) {
  const unsigned p = P.degree(v), q = Q.degree(v);
  std::vector<Polynomial> S(q + 1, Polynomial(P.order()));
  Polynomial lcQ = Q.coeff_in(v, q);
  S[q] = lcQ.pow(p - q - 1) * Q;
  Polynomial s = lcQ.pow(p - q);
  Polynomial A = Q;
  Polynomial B = prem_full(P, -Q, v);
  for (;;) {
    if (B.is_zero()) break;
    unsigned d = A.degree(v), e = B.degree(v);
    S[d - 1] = B;
    unsigned delta = d - e;
    Polynomial C;
    if (delta > 1) {
      Polynomial lcB = B.coeff_in(v, e);
      C = exact_divide(lcB.pow(delta - 1) * B, s.pow(delta - 1));
      S[e] = C;
    } else {
      C = B;
    }
    if (e == 0) break;
    Polynomial lcA = A.coeff_in(v, d);
    B = exact_divide(prem_full(A, -B, v), s.pow(delta) * lcA);
    A = std::move(C);
    s = A.coeff_in(v, A.degree(v));
  }
  return S;
}

}  // namespace

std::vector<Polynomial> subresultant_chain(const Polynomial& p, const Polynomial& q, Var v) {
  unsigned dp = p.degree(v), dq = q.degree(v);
  if (q.is_zero() || dq == 0 || dp <= dq)
    throw std::invalid_argument("subresultant_chain requires deg p > deg q >= 1");
  return ducos(p, q, v);
}

Polynomial principal_coefficient(const std::vector<Polynomial>& chain, std::size_t j, Var v) {
  return chain.at(j).coeff_in(v, static_cast<unsigned>(j));
}

Polynomial resultant(const Polynomial& P, const Polynomial& Q, Var v) {
  const VarOrderPtr& order = P.order() ? P.order() : Q.order();
  if (P.is_zero() || Q.is_zero()) return Polynomial(order);
  const unsigned p = P.degree(v), q = Q.degree(v);
  if (p == 0 && q == 0) throw std::invalid_argument("resultant: both polynomials constant in the variable");
  if (q == 0) return Q.pow(p);
  if (p == 0) return P.pow(q);
  if (p < q) return pow_sign(resultant(Q, P, v), 1ULL * p * q);
  if (q == 1) {
    Polynomial a = Q.coeff_in(v, 1), b = -Q.coeff_in(v, 0);
    auto cs = P.coefficients(v);
    // sum_k P_k b^k a^(p-k)
    std::vector<Polynomial> apow(p + 1, Polynomial(order, 1));
    for (unsigned k = 1; k <= p; ++k) apow[k] = apow[k - 1] * a;
    Polynomial acc(order);
    Polynomial bk(order, 1);
    for (unsigned k = 0; k <= p; ++k) {
      if (!cs[k].is_zero()) acc += cs[k] * bk * apow[p - k];
      if (k < p) bk *= b;
    }
    return pow_sign(acc, p);
  }
  if (p == q) {
    Polynomial lp = P.coeff_in(v, p), lq = Q.coeff_in(v, q);
    Polynomial R = lq * P - lp * Q;
    if (R.is_zero()) return Polynomial(order);
    unsigned r = R.degree(v);
    Polynomial rq = r == 0 ? R.pow(q) : resultant(Q, R, v);
    return pow_sign(exact_divide(rq, lq.pow(r)), 1ULL * p * q);
  }
  return ducos(P, Q, v)[0];
}

Polynomial res_chain(const Polynomial& p, std::span<const Polynomial> chain) {
  Polynomial r = p;
  for (std::size_t i = chain.size(); i-- > 0;) {
    if (r.is_zero() || r.is_constant()) break;
    Var v = chain[i].mvar();
    if (!r.involves(v)) continue;
    r = resultant(r, chain[i], v);
  }
  return r;
}

bool res_chain_nonzero(const Polynomial& p, std::span<const Polynomial> chain) {
  std::uint64_t mains = 0, all = p.support();
  for (const auto& t : chain) {
    mains |= std::uint64_t{1} << t.mvar();
    all |= t.support();
  }
  const std::uint64_t free = all & ~mains;
  // Specializing the free variables maps res(a, t) to a power of the
  // specialized initial of t times the specialized resultant, as long as no
  // initial vanishes identically. So nonzero images of the initials' and of
  // p's iterated resultants prove the generic one nonzero.
  for (int attempt = 0; free != 0 && attempt < 2; ++attempt) {
    std::map<Var, Rational> at;
    int k = 0;
    for (Var x = 0; x < p.nvars(); ++x)
      if (free >> x & 1) {
        int v = 2 + k++ + 5 * attempt;
        at[x] = Rational(k % 2 ? v : -v);
      }
    std::vector<Polynomial> image;
    bool ok = true;
    for (std::size_t i = 0; i < chain.size() && ok; ++i) {
      Polynomial init = init_of(chain[i]).evaluate(at);
      ok = !init.is_zero() && !res_chain(init, image).is_zero();
      image.push_back(chain[i].evaluate(at));
    }
    if (ok && !res_chain(p.evaluate(at), image).is_zero()) return true;
  }
  return !res_chain(p, chain).is_zero();
}

Polynomial reduce(const Polynomial& p, std::span<const Polynomial> chain) {
  Polynomial r = p;
  for (std::size_t i = chain.size(); i-- > 0;) {
    if (r.is_zero() || r.is_constant()) break;
    Var v = chain[i].mvar();
    if (r.degree(v) >= chain[i].degree(v)) r = prem(r, chain[i], v);
  }
  return r;
}

namespace {

bool univariate_in(const Polynomial& p, Var v) { return (p.support() & ~(std::uint64_t{1} << v)) == 0; }

Polynomial gcd_univariate(Polynomial a, Polynomial b, Var v) {
  if (a.degree(v) < b.degree(v)) std::swap(a, b);
  while (!b.is_zero()) {
    Polynomial r = prem(a, b, v);  // constant initial: exact division over Q
    a = std::move(b);
    b = std::move(r);
    if (!b.is_zero() && b.is_constant()) return Polynomial(a.order(), 1);
  }
  return normalize(a);
}

// A nonconstant common factor involves some shared variable x and survives
// every specialization of the other variables that keeps both degrees in x.
bool coprime_by_specialization(const Polynomial& p, const Polynomial& q) {
  const std::uint64_t all = p.support() | q.support();
  const std::uint64_t common = p.support() & q.support();
  for (Var x = 0; x < p.nvars(); ++x) {
    if (!(common >> x & 1)) continue;
    bool proved = false;
    for (int attempt = 0; attempt < 2 && !proved; ++attempt) {
      std::map<Var, Rational> at;
      int k = 0;
      for (Var y = 0; y < p.nvars(); ++y)
        if (y != x && (all >> y & 1)) at[y] = Rational(3 + 2 * k++ + 7 * attempt);
      Polynomial a = p.evaluate(at), b = q.evaluate(at);
      if (a.degree(x) != p.degree(x) || b.degree(x) != q.degree(x)) continue;
      if (!gcd_univariate(a, b, x).is_constant()) return false;
      proved = true;
    }
    if (!proved) return false;
  }
  return true;
}

}  // namespace

Polynomial content(const Polynomial& p, Var v) {
  if (p.is_zero()) return p;
  if (!p.involves(v)) return normalize(p);
  auto cs = p.coefficients(v);
  Polynomial g(p.order());
  // Cheapest coefficients first.
  std::sort(cs.begin(), cs.end(), [](const Polynomial& a, const Polynomial& b) { return a.size() < b.size(); });
  for (const auto& c : cs) {
    if (c.is_zero()) continue;
    g = g.is_zero() ? normalize(c) : gcd(g, c);
    if (g.is_constant()) return Polynomial(p.order(), 1);
  }
  return g;
}

Polynomial primitive_part(const Polynomial& p, Var v) {
  if (p.is_zero()) return p;
  Polynomial c = content(p, v);
  return normalize(exact_divide(p, c));
}

Polynomial gcd(const Polynomial& p, const Polynomial& q) {
  const VarOrderPtr& order = p.order() ? p.order() : q.order();
  if (p.is_zero()) return normalize(q);
  if (q.is_zero()) return normalize(p);
  if (p.is_constant() || q.is_constant()) return Polynomial(order, 1);
  if (p == q) return normalize(p);
  if (coprime_by_specialization(p, q)) return Polynomial(order, 1);
  Var vp = p.mvar(), vq = q.mvar();
  Var v = std::max(vp, vq);
  if (!p.involves(v)) return gcd(p, content(q, v));
  if (!q.involves(v)) return gcd(content(p, v), q);
  if (univariate_in(p, v) && univariate_in(q, v)) return gcd_univariate(p, q, v);

  Polynomial cp = content(p, v), cq = content(q, v);
  Polynomial c = gcd(cp, cq);
  Polynomial a = exact_divide(p, cp), b = exact_divide(q, cq);
  if (a.degree(v) < b.degree(v)) std::swap(a, b);
  if (auto quo = try_divide(a, b)) return normalize(c * b);
  if (a.degree(v) == b.degree(v)) {
    Polynomial r = prem(a, b, v);
    if (r.degree(v) == 0) return normalize(c);
    a = std::move(b);
    b = primitive_part(r, v);
    if (try_divide(a, b)) return normalize(c * b);
  }
  if (b.degree(v) == 0) return normalize(c);
  auto S = ducos(a, b, v);
  for (std::size_t j = 0; j < S.size(); ++j) {
    if (S[j].is_zero()) continue;
    if (S[j].degree(v) == 0) return normalize(c);
    return normalize(c * primitive_part(S[j], v));
  }
  return normalize(c * b);
}

namespace {

// A common factor of p and dp/dv survives any specialization of the other
// variables that keeps the degree in v, so a squarefree image proves p
// squarefree. Cheap compared with a multivariate gcd.
bool squarefree_by_specialization(const Polynomial& p, Var v) {
  const unsigned d = p.degree(v);
  std::uint64_t others = p.support() & ~(std::uint64_t{1} << v);
  if (others == 0) return false;
  for (int attempt = 0; attempt < 2; ++attempt) {
    std::map<Var, Rational> at;
    int k = 0;
    for (Var x = 0; x < p.nvars(); ++x)
      if (others >> x & 1) at[x] = Rational(3 + 2 * k++ + 7 * attempt);
    Polynomial image = p.evaluate(at);
    if (image.degree(v) != d) continue;
    DenseInt dense = to_dense(image, v);
    if (squarefree_dense(dense).size() == dense.size()) return true;
  }
  return false;
}

}  // namespace

Polynomial squarefree_primitive_part(const Polynomial& p, Var v) {
  if (p.degree(v) == 0) throw std::invalid_argument("squarefree_primitive_part: degree zero in variable");
  Polynomial pp = primitive_part(p, v);
  if (squarefree_by_specialization(pp, v)) return pp;
  Polynomial g = gcd(pp, pp.derivative(v));
  if (g.is_constant()) return pp;
  return normalize(exact_divide(pp, g));
}

Polynomial squarefree_part(const Polynomial& p) {
  if (p.is_zero()) return p;
  if (p.is_constant()) return Polynomial(p.order(), 1);
  Var v = p.mvar();
  Polynomial c = content(p, v);
  Polynomial head = squarefree_primitive_part(p, v);
  return normalize(squarefree_part(c) * head);
}

std::vector<unsigned> monomial_content(const Polynomial& p) {
  const std::size_t n = p.nvars();
  std::vector<unsigned> m(n, 0);
  if (p.is_zero()) return m;
  for (Var v = 0; v < n; ++v) m[v] = p.exponent(0, v);
  for (std::size_t t = 1; t < p.size(); ++t)
    for (Var v = 0; v < n; ++v) m[v] = std::min<unsigned>(m[v], p.exponent(t, v));
  return m;
}

std::vector<Rational> rational_roots(const Polynomial& p, Var v) {
  std::vector<Rational> roots;
  if (p.degree(v) == 0) return roots;
  DenseInt sq = squarefree_dense(to_dense(p, v));
  // A rational root a/b in lowest terms has b | lc; two such fractions are
  // at least 1/lc^2 apart, so the simplest rational of a narrow enclosure is
  // the only candidate.
  Integer lc = abs(sq.back());
  Rational width(1, 2 * lc * lc);
  for (auto iv : isolate_real_roots(sq)) {
    if (!iv.exact()) {
      refine_root(sq, iv, width);
      if (!iv.exact()) {
        Rational s = simplest_between(iv.lo, iv.hi);
        if (sign_at(sq, s) != 0) continue;
        iv.lo = iv.hi = s;
      }
    }
    roots.push_back(iv.lo);
  }
  return roots;
}

}  // namespace lieiso
