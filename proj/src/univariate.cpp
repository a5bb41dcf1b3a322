#include "lieiso/univariate.hpp"

#include <algorithm>
#include <stdexcept>

#include "lieiso/polyalg.hpp"

namespace lieiso {

DenseInt to_dense(const Polynomial& p, Var v) {
  if ((p.support() & ~(std::uint64_t{1} << v)) != 0) throw std::invalid_argument("to_dense: not univariate");
  if (p.is_zero()) return {};
  Polynomial q = normalize(p);
  DenseInt c(q.degree(v) + 1);
  for (std::size_t t = 0; t < q.size(); ++t) c[q.exponent(t, v)] = q.coeff(t).get_num();
  return c;
}

Polynomial from_dense(const DenseInt& c, const VarOrderPtr& order, Var v) {
  Polynomial p(order);
  for (std::size_t k = 0; k < c.size(); ++k)
    if (c[k] != 0) p += Polynomial::variable(order, v, static_cast<unsigned>(k)).scaled(Rational(c[k]));
  return p;
}

Rational eval_dense(const DenseInt& c, const Rational& x) {
  // Homogenised Horner on numerator/denominator keeps everything integral.
  const Integer& a = x.get_num();
  const Integer& b = x.get_den();
  Integer acc = 0, bpow = 1;
  for (std::size_t k = c.size(); k-- > 0;) {
    acc = acc * a + c[k] * bpow;
    bpow *= b;
  }
  // acc = b^n * c(x) with n = deg; bpow = b^(n+1)
  if (c.empty()) return 0;
  Integer den = bpow / b;
  Rational r(acc, den);
  r.canonicalize();
  return r;
}

int sign_at(const DenseInt& c, const Rational& x) {
  const Integer& a = x.get_num();
  const Integer& b = x.get_den();
  Integer acc = 0, bpow = 1;
  for (std::size_t k = c.size(); k-- > 0;) {
    acc = acc * a + c[k] * bpow;
    bpow *= b;
  }
  return sgn(acc);
}

DenseInt squarefree_dense(const DenseInt& c) {
  auto order = make_order({"x"});
  Polynomial p = from_dense(c, order, 0);
  if (p.is_constant()) return to_dense(p, 0);
  return to_dense(squarefree_part(p), 0);
}

namespace {

void trim(DenseInt& c) {
  while (!c.empty() && c.back() == 0) c.pop_back();
}

// c(x + 1)
DenseInt taylor_shift1(DenseInt c) {
  std::size_t n = c.size();
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t j = n - 1; j-- > i;) c[j] += c[j + 1];
  return c;
}

// Sign variations of (x+1)^n c(1/(x+1)): bounds the number of roots in (0, 1).
std::size_t descartes01(const DenseInt& c) {
  DenseInt r(c.rbegin(), c.rend());
  r = taylor_shift1(std::move(r));
  std::size_t var = 0;
  int last = 0;
  for (const auto& a : r) {
    int s = sgn(a);
    if (s == 0) continue;
    if (last != 0 && s != last) ++var;
    last = s;
  }
  return var;
}

// 2^n c(x/2)
DenseInt halve(const DenseInt& c) {
  DenseInt out(c.size());
  std::size_t n = c.size() - 1;
  for (std::size_t i = 0; i < c.size(); ++i) out[i] = c[i] << static_cast<mp_bitcnt_t>(n - i);
  return out;
}

// c / (x - 1), exact.
DenseInt divide_x_minus_1(const DenseInt& c) {
  std::size_t n = c.size() - 1;
  DenseInt q(n);
  Integer carry = 0;
  for (std::size_t k = n; k-- > 0;) {
    carry += c[k + 1];
    q[k] = carry;
  }
  return q;
}

struct Cell {
  DenseInt poly;
  Integer c;
  unsigned long k;
};

// Roots of c0 in (0, 1), with c0(0) != 0 and c0(1) != 0, as dyadic intervals.
void roots01(const DenseInt& c0, std::vector<std::pair<Rational, Rational>>& out) {
  std::vector<Cell> stack{{c0, 0, 0}};
  while (!stack.empty()) {
    Cell cell = std::move(stack.back());
    stack.pop_back();
    if (cell.poly.size() <= 1) continue;
    std::size_t v = descartes01(cell.poly);
    Rational lo(cell.c, Integer(1) << cell.k);
    Rational hi(cell.c + 1, Integer(1) << cell.k);
    lo.canonicalize();
    hi.canonicalize();
    if (v == 0) continue;
    if (v == 1) {
      // An earlier exact root may sit on an end point; shrink away from it.
      while (sign_at(c0, lo) == 0 || sign_at(c0, hi) == 0) {
        DenseInt left = halve(cell.poly);
        Integer at_mid = 0;
        for (const auto& a : left) at_mid += a;
        cell.c *= 2;
        ++cell.k;
        Rational mid(cell.c + 1, Integer(1) << cell.k);
        mid.canonicalize();
        if (at_mid == 0) {
          lo = hi = mid;
          break;
        }
        if (sgn(at_mid) != sgn(cell.poly[0])) {
          cell.poly = std::move(left);
          hi = mid;
        } else {
          cell.poly = taylor_shift1(std::move(left));
          ++cell.c;
          lo = mid;
        }
      }
      out.emplace_back(lo, hi);
      continue;
    }
    DenseInt left = halve(cell.poly);
    DenseInt right = taylor_shift1(left);
    if (right[0] == 0) {
      Rational mid(2 * cell.c + 1, Integer(1) << (cell.k + 1));
      mid.canonicalize();
      out.emplace_back(mid, mid);
      right.erase(right.begin());
      left = divide_x_minus_1(left);
    }
    stack.push_back({std::move(right), 2 * cell.c + 1, cell.k + 1});
    stack.push_back({std::move(left), 2 * cell.c, cell.k + 1});
  }
}

}  // namespace

std::vector<RootInterval> isolate_real_roots(const DenseInt& input) {
  DenseInt c = input;
  trim(c);
  std::vector<RootInterval> roots;
  if (c.size() <= 1) return roots;
  c = squarefree_dense(c);
  std::size_t low = 0;
  while (c[low] == 0) ++low;
  if (low > 0) {
    roots.push_back({0, 0});
    c.erase(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(low));
  }
  if (c.size() <= 1) return roots;

  std::size_t lead_bits = mpz_sizeinbase(c.back().get_mpz_t(), 2);
  std::size_t max_bits = 0;
  for (std::size_t i = 0; i + 1 < c.size(); ++i)
    if (c[i] != 0) max_bits = std::max(max_bits, mpz_sizeinbase(c[i].get_mpz_t(), 2));
  // every root lies strictly inside (-2^b, 2^b)
  long b = std::max<long>(0, static_cast<long>(max_bits) - static_cast<long>(lead_bits) + 2);
  Rational bound(Integer(1) << static_cast<mp_bitcnt_t>(b));

  for (int s : {1, -1}) {
    DenseInt scaled(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
      scaled[i] = c[i] << static_cast<mp_bitcnt_t>(b * static_cast<long>(i));
      if (s < 0 && i % 2 == 1) scaled[i] = -scaled[i];
    }
    std::vector<std::pair<Rational, Rational>> found;
    roots01(scaled, found);
    for (auto& [lo, hi] : found) {
      if (s > 0)
        roots.push_back({lo * bound, hi * bound});
      else
        roots.push_back({-hi * bound, -lo * bound});
    }
  }
  if (low > 0) {
    // intervals next to the removed root at 0 may end there; shrink them with
    // the deflated polynomial, which does not vanish at 0
    for (auto& iv : roots) {
      if (iv.exact() || (iv.lo != 0 && iv.hi != 0)) continue;
      int slo = sign_at(c, iv.lo);
      while (iv.lo == 0 || iv.hi == 0) {
        Rational m = midpoint(iv.lo, iv.hi);
        int sm = sign_at(c, m);
        if (sm == 0) {
          iv.lo = iv.hi = m;
        } else if (sm == slo) {
          iv.lo = m;
        } else {
          iv.hi = m;
        }
      }
    }
  }
  std::sort(roots.begin(), roots.end(), [](const RootInterval& x, const RootInterval& y) { return x.lo < y.lo; });
  return roots;
}

void refine_root(const DenseInt& sqfree, RootInterval& iv, const Rational& width) {
  if (iv.exact()) return;
  int slo = sign_at(sqfree, iv.lo);
  while (iv.hi - iv.lo > width) {
    Rational m = midpoint(iv.lo, iv.hi);
    int sm = sign_at(sqfree, m);
    if (sm == 0) {
      iv.lo = iv.hi = m;
      return;
    }
    if (sm == slo)
      iv.lo = m;
    else
      iv.hi = m;
  }
}

Rational simplest_between(const Rational& lo, const Rational& hi) {
  if (lo > hi) throw std::invalid_argument("simplest_between: empty interval");
  if (lo <= 0 && hi >= 0) return 0;
  if (hi < 0) return -simplest_between(-hi, -lo);
  Integer fl;
  mpz_fdiv_q(fl.get_mpz_t(), lo.get_num_mpz_t(), lo.get_den_mpz_t());
  if (Rational(fl) == lo) return lo;
  if (Rational(fl + 1) <= hi) return Rational(fl + 1);
  // lo and hi share the integer part fl; recurse on the reciprocals of the fractional parts
  Rational inner = simplest_between(1 / (hi - fl), 1 / (lo - fl));
  return Rational(fl) + 1 / inner;
}

}  // namespace lieiso
