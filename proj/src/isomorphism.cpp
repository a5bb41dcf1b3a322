#include <algorithm>
#include <random>
#include <sstream>
#include <stdexcept>

#include "detail/linalg.hpp"
#include "detail/subset_det.hpp"
#include "lieiso/lie.hpp"
#include "lieiso/polyalg.hpp"

namespace lieiso {

std::string to_string(Field f) { return f == Field::Complex ? "complex" : "real"; }

std::string to_string(IsoStatus s) {
  switch (s) {
    case IsoStatus::Isomorphic: return "isomorphic";
    case IsoStatus::NotIsomorphic: return "not_isomorphic";
    default: return "unknown";
  }
}

namespace {

// Univariate polynomials over Q, index = power, no trailing zeros.
using QPoly = std::vector<Rational>;

void trim(QPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

int deg(const QPoly& a) { return static_cast<int>(a.size()) - 1; }

QPoly add(const QPoly& a, const QPoly& b) {
  QPoly r(std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  trim(r);
  return r;
}

QPoly scale(QPoly a, const Rational& c) {
  if (c == 0) return {};
  for (auto& x : a) x *= c;
  return a;
}

QPoly sub(const QPoly& a, const QPoly& b) { return add(a, scale(b, -1)); }

QPoly mul(const QPoly& a, const QPoly& b) {
  if (a.empty() || b.empty()) return {};
  QPoly r(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != 0)
      for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  trim(r);
  return r;
}

// a = q*b + r
void divmod(const QPoly& a, const QPoly& b, QPoly& q, QPoly& r) {
  r = a;
  q.assign(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, Rational(0));
  const Rational lead = b.back();
  while (!r.empty() && r.size() >= b.size()) {
    std::size_t shift = r.size() - b.size();
    Rational c = r.back() / lead;
    q[shift] = c;
    for (std::size_t i = 0; i < b.size(); ++i) r[shift + i] -= c * b[i];
    r.pop_back();
    trim(r);
  }
  trim(q);
}

QPoly mod(const QPoly& a, const QPoly& m) {
  if (m.empty() || deg(a) < deg(m)) return a;
  QPoly q, r;
  divmod(a, m, q, r);
  return r;
}

QPoly monic(QPoly a) {
  if (a.empty()) return a;
  return scale(a, 1 / a.back());
}

QPoly gcd(QPoly a, QPoly b) {
  while (!b.empty()) {
    QPoly r = mod(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return monic(a);
}

QPoly quotient(const QPoly& a, const QPoly& b) {
  QPoly q, r;
  divmod(a, b, q, r);
  return q;
}

QPoly derivative(const QPoly& a) {
  QPoly d;
  for (std::size_t i = 1; i < a.size(); ++i) d.push_back(a[i] * static_cast<long>(i));
  trim(d);
  return d;
}

// Inverse of a modulo m; nullopt when not coprime.
std::optional<QPoly> inverse(const QPoly& a, const QPoly& m) {
  QPoly r0 = m, r1 = mod(a, m), s0, s1{Rational(1)};
  while (!r1.empty()) {
    QPoly q, r;
    divmod(r0, r1, q, r);
    QPoly s = sub(s0, mul(q, s1));
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s);
  }
  if (deg(r0) != 0) return std::nullopt;
  return mod(scale(s0, 1 / r0[0]), m);
}

Rational eval(const QPoly& a, const Rational& x) {
  Rational v = 0;
  for (std::size_t i = a.size(); i-- > 0;) v = v * x + a[i];
  return v;
}

int sign_at(const QPoly& a, const Rational& x) { return sgn(eval(a, x)); }

QPoly from_dense_int(const DenseInt& c) {
  QPoly a;
  for (const auto& x : c) a.push_back(Rational(x));
  trim(a);
  return a;
}

DenseInt to_dense_int(const QPoly& a) {
  Integer den = 1;
  for (const auto& x : a) den = lcm(den, Integer(x.get_den()));
  DenseInt c;
  Integer g = 0;
  for (const auto& x : a) {
    Integer v = Integer(x * den);
    c.push_back(v);
    g = gcd(g, v);
  }
  if (g != 0)
    for (auto& x : c) x /= g;
  if (!c.empty() && c.back() < 0)
    for (auto& x : c) x = -x;
  return c;
}

// theta: a root of the squarefree m, either any complex root (checks must
// hold for all of them) or the real root isolated in `root`.
struct Theta {
  QPoly m;
  std::optional<RootInterval> root;

  bool active() const { return !m.empty(); }

  QPoly reduce(const QPoly& a) const { return active() ? mod(a, m) : a; }
  QPoly times(const QPoly& a, const QPoly& b) const { return reduce(mul(a, b)); }

  // g divides m; does theta lie among the roots of g?
  bool root_of(const QPoly& g) const {
    if (deg(g) <= 0) return false;
    return sign_at(g, root->lo) * sign_at(g, root->hi) < 0;
  }

  // Makes a nonzero at theta by dropping roots of m where it vanishes.
  bool make_nonzero(const QPoly& a) {
    QPoly r = reduce(a);
    if (!active()) return !r.empty();
    QPoly g = gcd(m, r);
    if (deg(g) <= 0) return true;
    if (root && root_of(g)) return false;
    m = monic(quotient(m, g));
    return deg(m) > 0;
  }

  // Keeps only roots of m where a vanishes.
  bool make_zero(const QPoly& a) {
    QPoly r = reduce(a);
    if (r.empty()) return true;
    if (!active()) return false;
    QPoly g = gcd(m, r);
    if (deg(g) <= 0) return false;
    if (root && !root_of(g)) return false;
    m = g;
    return true;
  }

  bool vanishes(const QPoly& a) const {
    QPoly r = reduce(a);
    if (r.empty()) return true;
    if (!active() || !root) return false;
    return root_of(gcd(m, r));
  }

  bool nonzero_everywhere(const QPoly& a) const {
    QPoly r = reduce(a);
    if (r.empty()) return false;
    if (!active()) return true;
    QPoly g = gcd(m, r);
    if (deg(g) <= 0) return true;
    return root && !root_of(g);
  }
};

QPoly constant(const Rational& c) {
  QPoly a{c};
  trim(a);
  return a;
}

using Table = std::vector<std::vector<std::vector<Rational>>>;

std::optional<Table> rational_table(const LieAlgebra& L) {
  const std::size_t n = L.dim();
  Table c(n, std::vector<std::vector<Rational>>(n, std::vector<Rational>(n)));
  for (const auto& [key, coords] : L.table) {
    if (key.first >= n || key.second >= n || coords.size() != n) return std::nullopt;
    for (std::size_t s = 0; s < n; ++s) {
      if (!coords[s].is_constant() && !coords[s].is_zero()) return std::nullopt;
      Rational v = coords[s].is_zero() ? Rational(0) : coords[s].constant_value();
      c[key.first][key.second][s] = v;
      c[key.second][key.first][s] = -v;
    }
  }
  return c;
}

QPoly det_of(const std::vector<std::vector<QPoly>>& M, const Theta& th) {
  return detail::subset_det<QPoly>(
      M, QPoly{Rational(1)}, [&](const QPoly& a, const QPoly& b) { return th.times(a, b); },
      [](const QPoly& a, const QPoly& b) { return add(a, b); }, [](const QPoly& a) { return scale(a, -1); });
}

// Bracket residuals of phi(e_i) = sum_s M[s][i] e'_s.
std::vector<QPoly> residuals(const Table& a, const Table& b, const std::vector<std::vector<QPoly>>& M,
                             const Theta& th) {
  const std::size_t n = M.size();
  std::vector<QPoly> out;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      std::vector<std::vector<QPoly>> prod(n, std::vector<QPoly>(n));
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l) prod[k][l] = th.times(M[k][i], M[l][j]);
      for (std::size_t s = 0; s < n; ++s) {
        QPoly r;
        for (std::size_t k = 0; k < n; ++k)
          if (a[i][j][k] != 0) r = add(r, scale(M[s][k], a[i][j][k]));
        for (std::size_t k = 0; k < n; ++k)
          for (std::size_t l = 0; l < n; ++l)
            if (b[k][l][s] != 0) r = sub(r, scale(prod[k][l], b[k][l][s]));
        out.push_back(th.reduce(r));
      }
    }
  return out;
}

// Number of roots of the squarefree m inside the open interval (lo, hi).
std::size_t roots_inside(const DenseInt& m, const Rational& lo, const Rational& hi) {
  std::size_t count = 0;
  for (auto iv : isolate_real_roots(m)) {
    for (int round = 0;; ++round) {
      if (iv.exact()) {
        count += lo < iv.lo && iv.lo < hi;
        break;
      }
      // the root lies in the open interval (iv.lo, iv.hi)
      if (iv.hi <= lo || iv.lo >= hi) break;
      if (iv.lo >= lo && iv.hi <= hi) {
        ++count;
        break;
      }
      if (round > 4096) throw std::runtime_error("roots_inside: refinement did not terminate");
      refine_root(m, iv, (iv.hi - iv.lo) / 2);
    }
  }
  return count;
}

std::string qpoly_string(const QPoly& a, const std::string& theta) {
  if (a.empty()) return "0";
  auto order = make_order({theta});
  Polynomial p(order);
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != 0) p += Polynomial::variable(order, 0, static_cast<unsigned>(i)).scaled(a[i]);
  return p.to_string();
}

}  // namespace

Rational AlgebraicMatrix::at(std::size_t row, std::size_t col) const {
  if (!rational()) throw std::logic_error("AlgebraicMatrix::at: entries are not rational");
  const auto& e = entries.at(row).at(col);
  return e.empty() ? Rational(0) : e[0];
}

std::string AlgebraicMatrix::entry_string(std::size_t row, std::size_t col, const std::string& theta) const {
  QPoly a = entries.at(row).at(col);
  trim(a);
  return qpoly_string(a, theta);
}

std::string AlgebraicMatrix::to_string() const {
  std::ostringstream out;
  out << "[";
  for (std::size_t r = 0; r < n; ++r) {
    out << (r ? ", [" : "[");
    for (std::size_t c = 0; c < n; ++c) out << (c ? ", " : "") << entry_string(r, c);
    out << "]";
  }
  out << "]";
  if (!rational()) {
    out << " where t is a root of " << qpoly_string(from_dense_int(modulus), "t");
    if (real_root) out << " in (" << lieiso::to_string(real_root->lo) << ", " << lieiso::to_string(real_root->hi) << ")";
  }
  return out.str();
}

AlgebraicMatrix AlgebraicMatrix::from_rationals(const std::vector<std::vector<Rational>>& m) {
  AlgebraicMatrix M;
  M.n = m.size();
  M.entries.assign(M.n, std::vector<std::vector<Rational>>(M.n));
  for (std::size_t r = 0; r < M.n; ++r) {
    if (m[r].size() != M.n) throw std::invalid_argument("from_rationals: matrix is not square");
    for (std::size_t c = 0; c < M.n; ++c) M.entries[r][c] = constant(m[r][c]);
  }
  return M;
}

AlgebraicMatrix AlgebraicMatrix::from_theta(const std::vector<std::vector<std::string>>& m, const std::string& modulus,
                                            std::optional<RootInterval> real_root) {
  auto order = make_order({"t"});
  auto to_q = [&](const std::string& text) {
    Polynomial p = parse_polynomial(text, order);
    QPoly a(p.is_zero() ? 0 : p.degree(0) + 1);
    for (std::size_t t = 0; t < p.size(); ++t) a[p.exponent(t, 0)] += p.coeff(t);
    trim(a);
    return a;
  };
  AlgebraicMatrix M;
  M.n = m.size();
  QPoly mod_q = modulus.empty() ? QPoly{} : to_q(modulus);
  if (!modulus.empty()) {
    if (deg(mod_q) < 1) throw std::invalid_argument("from_theta: modulus must have positive degree");
    M.modulus = to_dense_int(mod_q);
  }
  M.real_root = real_root;
  M.entries.assign(M.n, std::vector<std::vector<Rational>>(M.n));
  for (std::size_t r = 0; r < M.n; ++r) {
    if (m[r].size() != M.n) throw std::invalid_argument("from_theta: matrix is not square");
    for (std::size_t c = 0; c < M.n; ++c) M.entries[r][c] = mod(to_q(m[r][c]), mod_q);
  }
  return M;
}

bool verify_isomorphism(const LieAlgebra& L, const LieAlgebra& Lp, const AlgebraicMatrix& M) {
  const std::size_t n = L.dim();
  if (Lp.dim() != n || M.n != n || M.entries.size() != n) return false;
  auto a = rational_table(L), b = rational_table(Lp);
  if (!a || !b) return false;
  Theta th;
  if (!M.rational()) {
    th.m = monic(from_dense_int(M.modulus));
    if (deg(th.m) < 1 || deg(gcd(th.m, derivative(th.m))) > 0) return false;
    if (M.real_root) {
      const auto& iv = *M.real_root;
      if (!(iv.lo < iv.hi) || roots_inside(to_dense_int(th.m), iv.lo, iv.hi) != 1) return false;
      if (sign_at(th.m, iv.lo) == 0 || sign_at(th.m, iv.hi) == 0) return false;
      th.root = iv;
    }
  } else if (M.real_root) {
    return false;
  }
  std::vector<std::vector<QPoly>> Z(n, std::vector<QPoly>(n));
  for (std::size_t r = 0; r < n; ++r) {
    if (M.entries[r].size() != n) return false;
    for (std::size_t c = 0; c < n; ++c) {
      QPoly e = M.entries[r][c];
      trim(e);
      if (!th.active() && deg(e) > 0) return false;
      Z[r][c] = th.reduce(e);
    }
  }
  for (const auto& r : residuals(*a, *b, Z, th))
    if (!th.vanishes(r)) return false;
  return th.nonzero_everywhere(det_of(Z, th));
}

namespace {

Polynomial to_poly(const QPoly& a, const VarOrderPtr& order, Var v) {
  Polynomial p(order);
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != 0) p += Polynomial::variable(order, v, static_cast<unsigned>(i)).scaled(a[i]);
  return p;
}

// p must involve no variable but v.
QPoly to_qpoly(const Polynomial& p, Var v) {
  QPoly a(p.is_zero() ? 0 : p.degree(v) + 1);
  for (std::size_t t = 0; t < p.size(); ++t) a[p.exponent(t, v)] += p.coeff(t);
  trim(a);
  return a;
}

// Sign of a at the root of the squarefree m isolated by iv.
int sign_at_root(const QPoly& a, const QPoly& m, RootInterval iv) {
  if (iv.exact()) return sign_at(a, iv.lo);
  QPoly r = mod(a, m);
  if (r.empty()) return 0;
  QPoly g = gcd(m, r);
  if (deg(g) > 0 && sign_at(g, iv.lo) * sign_at(g, iv.hi) < 0) return 0;
  DenseInt md = to_dense_int(m), rd = squarefree_dense(to_dense_int(r));
  for (int round = 0; round < 4096; ++round) {
    if (iv.exact()) return sign_at(r, iv.lo);
    int lo = sign_at(r, iv.lo);
    if (lo != 0 && lo == sign_at(r, iv.hi) && roots_inside(rd, iv.lo, iv.hi) == 0) return lo;
    refine_root(md, iv, (iv.hi - iv.lo) / 2);
  }
  throw std::runtime_error("sign_at_root: refinement did not terminate");
}

// Adjoins a root y of sum_k q[k] y^k (coefficients in Q(theta), degree >= 2)
// through the primitive element gamma = y + c*theta. The known values are
// rewritten in gamma and y is returned. For the real field gamma is a real
// root lying over the current real theta.
std::optional<QPoly> adjoin_root(Theta& th, std::vector<std::optional<QPoly>>& value, const std::vector<QPoly>& q,
                                 Field field, unsigned attempt) {
  auto order = make_order({"g", "t"});
  const Var G = 0, T = 1;
  const Polynomial m = to_poly(th.m, order, T);
  const Polynomial tv = Polynomial::variable(order, T), gv = Polynomial::variable(order, G);
  for (int c = 1; c <= 8; ++c) {
    const Polynomial y = gv - tv.scaled(Rational(c));
    Polynomial Q(order), power(order, Rational(1));
    for (const auto& coef : q) {
      Q += to_poly(coef, order, T) * power;
      power = power * y;
    }
    Q = prem(Q, m, T);
    if (Q.degree(T) == 0) continue;
    QPoly N = to_qpoly(resultant(m, Q, T), G);
    // squarefree N: distinct (theta, y) pairs give distinct gamma
    if (deg(N) < 1 || deg(gcd(N, derivative(N))) > 0) continue;
    N = monic(N);
    // at each root of N the gcd of m and Q in t is the first subresultant s1 t + s0
    auto S = subresultant_chain(m, Q, T);
    QPoly s1 = to_qpoly(S[1].coeff_in(T, 1), G), s0 = to_qpoly(S[1].coeff_in(T, 0), G);
    auto inv = inverse(mod(s1, N), N);
    if (!inv) continue;
    Theta next{N, std::nullopt};
    const QPoly theta = next.times(scale(s0, -1), *inv);
    if (field == Field::Real) {
      std::vector<RootInterval> over;
      for (auto iv : isolate_real_roots(to_dense_int(N))) {
        if (th.root->exact()) {
          if (sign_at_root(sub(theta, constant(th.root->lo)), N, iv) == 0) over.push_back(iv);
        } else if (sign_at_root(sub(theta, constant(th.root->lo)), N, iv) > 0 &&
                   sign_at_root(sub(theta, constant(th.root->hi)), N, iv) < 0) {
          over.push_back(iv);
        }
      }
      if (over.empty()) return std::nullopt;
      next.root = over[attempt % over.size()];
    }
    auto lift = [&](const QPoly& a) {
      QPoly r;
      for (std::size_t k = a.size(); k-- > 0;) r = add(next.times(r, theta), constant(a[k]));
      return r;
    };
    for (auto& v : value)
      if (v) v = lift(*v);
    th = std::move(next);
    return th.reduce(sub(QPoly{Rational(0), Rational(1)}, scale(theta, c)));
  }
  return std::nullopt;
}

// One attempt at solving the chain level by level from a choice of free values.
std::optional<AlgebraicMatrix> extract_once(const Table& a, const Table& b, const IsoSystem& sys,
                                            const RegularSystem& rs, Field field, unsigned attempt) {
  const RegularChain& T = rs.chain;
  const std::size_t nv = sys.order->size();
  std::mt19937_64 rng(attempt * 7919 + 17);
  const int range = 1 + static_cast<int>(attempt / 4);
  std::uniform_int_distribution<int> pick(-range, range);

  Theta th;
  std::vector<std::optional<QPoly>> value(nv);
  auto free_value = [&]() -> Rational {
    if (attempt == 0) return 1;
    if (attempt == 1) return 0;
    return pick(rng);
  };

  // value of a polynomial whose variables below `limit` are all known, as
  // coefficients in variable `v` (only v may be unknown)
  auto coefficients = [&](const Polynomial& p, Var v) {
    std::vector<QPoly> coef(p.is_zero() ? 0 : p.degree(v) + 1);
    for (std::size_t t = 0; t < p.size(); ++t) {
      QPoly term = constant(p.coeff(t));
      for (Var w = 0; w < nv && !term.empty(); ++w) {
        if (w == v) continue;
        unsigned e = p.exponent(t, w);
        for (unsigned k = 0; k < e; ++k) term = th.times(term, *value[w]);
      }
      coef[p.exponent(t, v)] = add(coef[p.exponent(t, v)], term);
    }
    return coef;
  };
  auto value_of = [&](const Polynomial& p) {
    auto c = coefficients(p, 0);
    QPoly r;
    QPoly x = value[0] ? *value[0] : QPoly{};
    for (std::size_t k = c.size(); k-- > 0;) r = add(th.times(r, x), c[k]);
    return r;
  };

  for (Var v = 0; v < nv; ++v) {
    const Polynomial* t = T.base().with_mvar(v);
    if (!t) {
      value[v] = constant(free_value());
      continue;
    }
    auto c = coefficients(*t, v);
    for (auto& x : c) x = th.reduce(x);
    if (!th.make_nonzero(c.back())) return std::nullopt;
    for (auto& x : c) x = th.reduce(x);
    if (c.size() == 2) {
      auto inv = th.active() ? inverse(c[1], th.m) : std::optional<QPoly>(constant(1 / c[1][0]));
      if (!inv) return std::nullopt;
      value[v] = th.times(scale(c[0], -1), *inv);
      continue;
    }
    bool rational = std::all_of(c.begin(), c.end(), [](const QPoly& x) { return deg(x) <= 0; });
    QPoly u;
    if (rational) {
      for (const auto& x : c) u.push_back(x.empty() ? Rational(0) : x[0]);
      trim(u);
      auto xorder = make_order({"x"});
      auto roots = rational_roots(from_dense(to_dense_int(u), xorder, 0), 0);
      if (!roots.empty()) {
        value[v] = constant(roots[attempt % roots.size()]);
        continue;
      }
    }
    if (th.active()) {
      auto y = adjoin_root(th, value, c, field, attempt);
      if (!y) return std::nullopt;
      value[v] = *y;
      continue;
    }
    DenseInt dense = to_dense_int(u);
    DenseInt sqf = squarefree_dense(dense);
    th.m = monic(from_dense_int(sqf));
    if (field == Field::Real) {
      auto real = isolate_real_roots(sqf);
      if (real.empty()) return std::nullopt;
      th.root = real[attempt % real.size()];
    }
    value[v] = QPoly{Rational(0), Rational(1)};
  }

  for (const auto& h : rs.inequations)
    if (!th.make_nonzero(value_of(h))) return std::nullopt;
  for (const auto& h : T.base().inits())
    if (!th.make_nonzero(value_of(h))) return std::nullopt;

  const std::size_t n = sys.n;
  std::vector<std::vector<QPoly>> Z(n, std::vector<QPoly>(n));
  auto rebuild = [&]() {
    for (std::size_t s = 0; s < n; ++s)
      for (std::size_t i = 0; i < n; ++i) Z[s][i] = th.reduce(*value[sys.z(i, s)]);
  };
  rebuild();
  for (const auto& r : residuals(a, b, Z, th)) {
    if (!th.make_zero(r)) return std::nullopt;
    rebuild();
  }
  if (!th.make_nonzero(det_of(Z, th))) return std::nullopt;
  rebuild();

  AlgebraicMatrix M;
  M.n = n;
  M.entries.assign(n, std::vector<std::vector<Rational>>(n));
  if (th.active() && deg(th.m) == 1) {
    // theta turned out rational
    Rational root = -th.m[0] / th.m[1];
    for (std::size_t s = 0; s < n; ++s)
      for (std::size_t i = 0; i < n; ++i) M.entries[s][i] = constant(eval(Z[s][i], root));
  } else {
    if (th.active()) {
      M.modulus = to_dense_int(th.m);
      M.real_root = th.root;
    }
    for (std::size_t s = 0; s < n; ++s)
      for (std::size_t i = 0; i < n; ++i) M.entries[s][i] = Z[s][i];
  }
  return M;
}

bool parametric(const LieAlgebra& L) { return !rational_table(L).has_value(); }

}  // namespace

std::optional<AlgebraicMatrix> extract_isomorphism(const LieAlgebra& L, const LieAlgebra& Lp, const IsoSystem& sys,
                                                   const RegularSystem& rs, Field field, unsigned attempts) {
  auto a = rational_table(L), b = rational_table(Lp);
  if (!a || !b || sys.param_count != 0) return std::nullopt;
  for (unsigned k = 0; k < attempts; ++k) {
    auto M = extract_once(*a, *b, sys, rs, field, k);
    if (M && verify_isomorphism(L, Lp, *M)) return M;
  }
  return std::nullopt;
}

namespace {

using detail::Vec;

struct Labeled {
  std::string label;
  std::vector<Vec> basis;
};

// Subspaces that every isomorphism maps onto the subspace with the same label.
std::vector<Labeled> characteristic_subspaces(const detail::Table& c, std::size_t n) {
  using namespace detail;
  std::vector<Vec> whole;
  for (std::size_t i = 0; i < n; ++i) {
    Vec e(n);
    e[i] = 1;
    whole.push_back(e);
  }
  std::vector<Labeled> base;
  auto D = whole;
  for (int k = 1;; ++k) {
    auto next = bracket_spaces(c, D, D);
    if (next.size() == D.size()) break;
    D = next;
    base.push_back({"D" + std::to_string(k), D});
  }
  auto C = whole;
  for (int k = 1;; ++k) {
    auto next = bracket_spaces(c, whole, C);
    if (next.size() == C.size()) break;
    C = next;
    base.push_back({"C" + std::to_string(k), C});
  }
  // upper central series: Z_{k+1} = {x : [x, L] in Z_k}
  std::vector<Vec> Z;
  for (int k = 1;; ++k) {
    std::vector<Vec> rows;
    for (const auto& lam : annihilator(Z, n))
      for (std::size_t j = 0; j < n; ++j) {
        Vec r(n);
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t s = 0; s < n; ++s) r[i] += lam[s] * c[i][j][s];
        rows.push_back(r);
      }
    auto next = nullspace(rows, n);
    if (next.size() == Z.size()) break;
    Z = next;
    base.push_back({"Z" + std::to_string(k), Z});
  }
  // centralizers of the subspaces found so far
  std::size_t found = base.size();
  for (std::size_t b = 0; b < found; ++b) {
    std::vector<Vec> rows;
    for (const auto& u : base[b].basis)
      for (std::size_t s = 0; s < n; ++s) {
        Vec r(n);
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j) r[i] += u[j] * c[i][j][s];
        rows.push_back(r);
      }
    base.push_back({"cent(" + base[b].label + ")", nullspace(rows, n)});
  }
  std::vector<Labeled> out = base;
  for (std::size_t a = 0; a < base.size(); ++a)
    for (std::size_t b = a + 1; b < base.size(); ++b) {
      out.push_back({base[a].label + "+" + base[b].label, subspace_sum(base[a].basis, base[b].basis)});
      out.push_back({base[a].label + "&" + base[b].label, subspace_intersection(base[a].basis, base[b].basis, n)});
    }
  std::erase_if(out, [&](const Labeled& l) { return l.basis.empty() || l.basis.size() == n; });
  return out;
}

using Mat = std::vector<std::vector<Rational>>;

// Basis extending the subspaces in order of dimension, then unit vectors;
// columns of the result are the new basis vectors.
Mat adapted_basis(std::vector<Labeled> subspaces, std::size_t n) {
  std::stable_sort(subspaces.begin(), subspaces.end(), [](const Labeled& a, const Labeled& b) {
    if (a.basis.size() != b.basis.size()) return a.basis.size() < b.basis.size();
    return a.label < b.label;
  });
  std::vector<Vec> chosen;
  auto offer = [&](const Vec& v) {
    auto with = chosen;
    with.push_back(v);
    if (detail::span_basis(with).size() > chosen.size()) chosen.push_back(v);
  };
  for (const auto& l : subspaces)
    for (const auto& v : l.basis) offer(v);
  for (std::size_t i = 0; i < n; ++i) {
    Vec e(n);
    e[i] = 1;
    offer(e);
  }
  Mat P(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) P[k][i] = chosen[i][k];
  return P;
}

Mat inverse(const Mat& P) {
  const std::size_t n = P.size();
  std::vector<Vec> aug(n, Vec(2 * n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug[i][j] = P[i][j];
    aug[i][n + i] = 1;
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (aug[piv][col] == 0) ++piv;
    std::swap(aug[piv], aug[col]);
    Rational inv = 1 / aug[col][col];
    for (auto& x : aug[col]) x *= inv;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || aug[r][col] == 0) continue;
      Rational f = aug[r][col];
      for (std::size_t k = 0; k < 2 * n; ++k) aug[r][k] -= f * aug[col][k];
    }
  }
  Mat out(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out[i][j] = aug[i][n + j];
  return out;
}

// Both algebras rewritten in adapted bases, plus the linear conditions
// phi(U) within U' for every characteristic subspace.
struct Setup {
  LieAlgebra L, Lp;
  Mat P, Pp;  // new basis vectors as columns in the old coordinates
  std::vector<std::pair<std::vector<Vec>, std::vector<Vec>>> maps;  // (U in L, annihilator of U' in L')
  std::string mismatch;
};

Mat identity(std::size_t n) {
  Mat I(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i) I[i][i] = 1;
  return I;
}

Setup adapt(const LieAlgebra& L, const LieAlgebra& Lp, bool enabled) {
  const std::size_t n = L.dim();
  Setup st{L, Lp, identity(n), identity(n), {}, {}};
  if (!enabled) return st;
  auto a = characteristic_subspaces(detail::constant_table(L), n);
  auto b = characteristic_subspaces(detail::constant_table(Lp), n);
  std::map<std::string, std::size_t> da, db;
  for (const auto& l : a) da[l.label] = l.basis.size();
  for (const auto& l : b) db[l.label] = l.basis.size();
  if (da != db) {
    for (const auto& [label, d] : da)
      if (!db.count(label) || db[label] != d) {
        st.mismatch = "characteristic subspace " + label + " has dimension " + std::to_string(d) + " vs " +
                      std::to_string(db.count(label) ? db[label] : (label.empty() ? 0 : n));
        return st;
      }
    for (const auto& [label, d] : db)
      if (!da.count(label)) {
        st.mismatch = "characteristic subspace " + label + " has dimension " + std::to_string(d) + " in the second algebra only";
        return st;
      }
  }
  st.P = adapted_basis(a, n);
  st.Pp = adapted_basis(b, n);
  st.L = change_basis(L, st.P);
  st.Lp = change_basis(Lp, st.Pp);
  auto na = characteristic_subspaces(detail::constant_table(st.L), n);
  auto nb = characteristic_subspaces(detail::constant_table(st.Lp), n);
  std::map<std::string, std::vector<Vec>> by_label;
  for (const auto& l : nb) by_label[l.label] = l.basis;
  for (const auto& l : na) st.maps.push_back({l.basis, detail::annihilator(by_label.at(l.label), n)});
  return st;
}

std::vector<Polynomial> subspace_equations(const Setup& st, const IsoSystem& sys) {
  std::vector<Polynomial> out;
  const std::size_t n = sys.n;
  for (const auto& [U, ann] : st.maps)
    for (const auto& u : U)
      for (const auto& lam : ann) {
        Polynomial f(sys.order);
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t s = 0; s < n; ++s)
            if (u[i] != 0 && lam[s] != 0) f += Polynomial::variable(sys.order, sys.z(i, s)).scaled(u[i] * lam[s]);
        if (!f.is_zero()) out.push_back(f);
      }
  return out;
}

// Matrix of the same map in the original bases: P' N P^-1.
AlgebraicMatrix to_original(const AlgebraicMatrix& N, const Setup& st) {
  const std::size_t n = N.n;
  Mat Pinv = inverse(st.P);
  AlgebraicMatrix M = N;
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t i = 0; i < n; ++i) {
      QPoly acc;
      for (std::size_t a = 0; a < n; ++a) {
        if (st.Pp[s][a] == 0) continue;
        for (std::size_t b = 0; b < n; ++b) {
          if (Pinv[b][i] == 0) continue;
          QPoly e = N.entries[a][b];
          trim(e);
          acc = add(acc, scale(e, st.Pp[s][a] * Pinv[b][i]));
        }
      }
      M.entries[s][i] = acc;
    }
  return M;
}

struct Prepared {
  Setup st;
  IsoSystem sys;
  std::vector<Polynomial> F;
  bool inconsistent = false;
};

Prepared prepare(const LieAlgebra& L, const LieAlgebra& Lp, const IsoOptions& options, bool constant) {
  Prepared p;
  if (constant) {
    p.st = adapt(L, Lp, options.adapted_basis);
  } else {
    p.st = Setup{L, Lp, {}, {}, {}, {}};
  }
  if (!p.st.mismatch.empty()) return p;
  p.sys = iso_system(p.st.L, p.st.Lp);
  std::vector<Polynomial> F = p.sys.equations;
  if (constant) {
    auto extra = subspace_equations(p.st, p.sys);
    F.insert(F.end(), extra.begin(), extra.end());
  }
  p.F = options.linear_elimination ? eliminate_linear(F, p.sys.param_count) : F;
  p.inconsistent = p.F.size() == 1 && p.F[0].is_constant() && !p.F[0].is_zero();
  return p;
}

std::optional<AlgebraicMatrix> extract_original(const LieAlgebra& L, const LieAlgebra& Lp, const Prepared& p,
                                                const RegularSystem& rs, Field field) {
  auto N = extract_isomorphism(p.st.L, p.st.Lp, p.sys, rs, field);
  if (!N) return std::nullopt;
  AlgebraicMatrix M = to_original(*N, p.st);
  if (!verify_isomorphism(L, Lp, M)) return std::nullopt;
  return M;
}

std::optional<IsoVerdict> quick_checks(const LieAlgebra& L, const LieAlgebra& Lp, const IsoOptions& options,
                                       Field field) {
  if (parametric(L) || parametric(Lp))
    throw std::invalid_argument("structure constants depend on parameters; use the parametric queries");
  IsoVerdict v;
  v.field = field;
  if (L.dim() != Lp.dim()) {
    v.status = IsoStatus::NotIsomorphic;
    v.evidence = "dimensions differ";
    return v;
  }
  if (options.prefilter) {
    auto rep = invariant_prefilter(L, Lp);
    if (rep.distinguished) {
      v.status = IsoStatus::NotIsomorphic;
      v.evidence = "invariants differ: " + rep.reason;
      return v;
    }
  }
  return std::nullopt;
}

std::string system_summary(const std::vector<RegularSystem>& systems) {
  std::string dims;
  for (const auto& rs : systems) dims += (dims.empty() ? "" : ",") + std::to_string(chain_dimension(rs.chain));
  return std::to_string(systems.size()) + " regular system(s), dimensions " + dims;
}

// Shared part of both decisions: NotIsomorphic/Unknown verdicts, or the
// regular systems of the prepared equations.
std::optional<IsoVerdict> decompose_prepared(const Prepared& p, const IsoOptions& options, Field field,
                                             std::vector<RegularSystem>& systems) {
  IsoVerdict v;
  v.field = field;
  if (!p.st.mismatch.empty()) {
    v.status = IsoStatus::NotIsomorphic;
    v.evidence = p.st.mismatch;
    return v;
  }
  if (p.inconsistent) {
    v.status = IsoStatus::NotIsomorphic;
    v.evidence = "linear part of the isomorphism equations is inconsistent";
    return v;
  }
  try {
    DecomposeOptions dopt;
    dopt.order = p.sys.order;
    systems = decompose(p.F, p.sys.H, options.budget, dopt);
  } catch (const BudgetExceeded& e) {
    v.status = IsoStatus::Unknown;
    v.evidence = std::string("budget exceeded: ") + e.what();
    return v;
  }
  if (systems.empty()) {
    v.status = IsoStatus::NotIsomorphic;
    v.evidence = field == Field::Complex ? "triangular decomposition of the isomorphism equations is empty"
                                         : "no complex solution, hence no real one";
    return v;
  }
  return std::nullopt;
}

}  // namespace

namespace {

// Inverse via the adjugate; roots of the modulus where det vanishes are dropped.
std::optional<AlgebraicMatrix> invert(const AlgebraicMatrix& M) {
  const std::size_t n = M.n;
  Theta th;
  if (!M.rational()) {
    th.m = monic(from_dense_int(M.modulus));
    th.root = M.real_root;
  }
  std::vector<std::vector<QPoly>> A(n, std::vector<QPoly>(n));
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) A[r][c] = M.entries[r][c];
  if (!th.make_nonzero(det_of(A, th))) return std::nullopt;
  QPoly det = det_of(A, th);
  auto inv_det = th.active() ? inverse(det, th.m) : std::optional<QPoly>(constant(1 / det[0]));
  if (!inv_det) return std::nullopt;
  AlgebraicMatrix out;
  out.n = n;
  out.entries.assign(n, std::vector<std::vector<Rational>>(n));
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      std::vector<std::vector<QPoly>> minor;
      for (std::size_t i = 0; i < n; ++i) {
        if (i == r) continue;
        std::vector<QPoly> row;
        for (std::size_t j = 0; j < n; ++j)
          if (j != c) row.push_back(A[i][j]);
        minor.push_back(std::move(row));
      }
      QPoly cof = n == 1 ? constant(1) : det_of(minor, th);
      if ((r + c) % 2) cof = scale(cof, -1);
      out.entries[c][r] = th.times(cof, *inv_det);
    }
  if (th.active()) {
    out.modulus = to_dense_int(th.m);
    out.real_root = th.root;
  }
  return out;
}

// An undecided pair is retried with the algebras swapped: the equations in the
// other direction often triangularize far more easily.
IsoVerdict with_reverse(const LieAlgebra& L, const LieAlgebra& Lp, const IsoOptions& options, IsoVerdict v,
                        IsoVerdict (*decide)(const LieAlgebra&, const LieAlgebra&, const IsoOptions&)) {
  if (v.status != IsoStatus::Unknown || !options.try_reverse) return v;
  IsoOptions once = options;
  once.try_reverse = false;
  IsoVerdict r = decide(Lp, L, once);
  if (r.status == IsoStatus::Unknown) return v;
  r.evidence += " (decided for the swapped pair)";
  if (r.matrix) {
    auto inv = invert(*r.matrix);
    r.matrix.reset();
    if (inv && verify_isomorphism(L, Lp, *inv)) r.matrix = inv;
  }
  return r;
}

}  // namespace

IsoVerdict is_isomorphic_complex(const LieAlgebra& L, const LieAlgebra& Lp, const IsoOptions& options) {
  if (auto v = quick_checks(L, Lp, options, Field::Complex)) return *v;
  if (options.try_reverse) {
    IsoOptions once = options;
    once.try_reverse = false;
    return with_reverse(L, Lp, options, is_isomorphic_complex(L, Lp, once), is_isomorphic_complex);
  }
  Prepared p = prepare(L, Lp, options, true);
  std::vector<RegularSystem> systems;
  if (auto v = decompose_prepared(p, options, Field::Complex, systems)) return *v;
  IsoVerdict v;
  v.field = Field::Complex;
  v.status = IsoStatus::Isomorphic;
  v.evidence = "nonempty triangular decomposition: " + system_summary(systems);
  for (const auto& rs : systems)
    if ((v.matrix = extract_original(L, Lp, p, rs, Field::Complex))) break;
  return v;
}

IsoVerdict is_isomorphic_real(const LieAlgebra& L, const LieAlgebra& Lp, const IsoOptions& options) {
  if (auto v = quick_checks(L, Lp, options, Field::Real)) return *v;
  if (options.try_reverse) {
    IsoOptions once = options;
    once.try_reverse = false;
    return with_reverse(L, Lp, options, is_isomorphic_real(L, Lp, once), is_isomorphic_real);
  }
  Prepared p = prepare(L, Lp, options, true);
  std::vector<RegularSystem> systems;
  if (auto v = decompose_prepared(p, options, Field::Real, systems)) return *v;
  IsoVerdict v;
  v.field = Field::Real;
  for (const auto& rs : systems) {
    if (auto M = extract_original(L, Lp, p, rs, Field::Real)) {
      v.status = IsoStatus::Isomorphic;
      v.matrix = M;
      v.evidence = "verified real isomorphism matrix";
      return v;
    }
  }
  RealOptions ropt = options.real;
  ropt.budget = options.budget;
  RealVerdict rv = sas_has_real_solution(SAS{p.sys.order, p.F, p.sys.N, p.sys.P, p.sys.H}, ropt);
  switch (rv.status) {
    case RealStatus::NonEmpty: {
      v.status = IsoStatus::Isomorphic;
      v.evidence = "certified real solution of the isomorphism equations";
      if (rv.witness)
        if (auto pt = rv.witness->point()) {
          std::vector<std::vector<Rational>> m(p.sys.n, std::vector<Rational>(p.sys.n));
          for (std::size_t s = 0; s < p.sys.n; ++s)
            for (std::size_t i = 0; i < p.sys.n; ++i) m[s][i] = pt->at(p.sys.z(i, s));
          auto M = to_original(AlgebraicMatrix::from_rationals(m), p.st);
          if (verify_isomorphism(L, Lp, M)) v.matrix = M;
        }
      break;
    }
    case RealStatus::Empty:
      v.status = IsoStatus::NotIsomorphic;
      v.evidence = "the isomorphism equations have no real solution: " + rv.reason;
      break;
    default:
      v.status = IsoStatus::Unknown;
      v.evidence = "real solvability undecided: " + rv.reason;
  }
  return v;
}

ConstructibleSet param_iso_complex(const LieAlgebra& L, const LieAlgebra& Lp, const IsoOptions& options) {
  if (L.dim() != Lp.dim()) throw std::invalid_argument("param_iso_complex: dimensions differ");
  Prepared p = prepare(L, Lp, options, false);
  return project_complex(p.sys.order, p.F, p.sys.H, p.sys.param_count, options.budget);
}

RealRegion param_iso_real(const LieAlgebra& L, const LieAlgebra& Lp, const RealProjectionOptions& projection,
                          const IsoOptions& options) {
  if (L.dim() != Lp.dim()) throw std::invalid_argument("param_iso_real: dimensions differ");
  Prepared p = prepare(L, Lp, options, false);
  RealProjectionOptions opt = projection;
  opt.real.budget = options.budget;
  return project_real(SAS{p.sys.order, p.F, p.sys.N, p.sys.P, p.sys.H}, p.sys.param_count, opt);
}

}  // namespace lieiso
