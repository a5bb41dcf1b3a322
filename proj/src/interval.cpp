#include "lieiso/interval.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace lieiso {

std::optional<int> Interval::sign() const {
  if (lo > 0) return 1;
  if (hi < 0) return -1;
  if (lo == 0 && hi == 0) return 0;
  return std::nullopt;
}

std::string Interval::to_string() const {
  return "[" + lieiso::to_string(lo) + ", " + lieiso::to_string(hi) + "]";
}

Interval operator+(const Interval& a, const Interval& b) { return {a.lo + b.lo, a.hi + b.hi}; }
Interval operator-(const Interval& a, const Interval& b) { return {a.lo - b.hi, a.hi - b.lo}; }
Interval operator-(const Interval& a) { return {-a.hi, -a.lo}; }

Interval operator*(const Interval& a, const Interval& b) {
  if (a.is_point() && b.is_point()) return Interval(a.lo * b.lo);
  Rational p[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  return {*std::min_element(p, p + 4), *std::max_element(p, p + 4)};
}

Interval pow(const Interval& a, unsigned k) {
  if (k == 0) return Interval(Rational(1));
  Rational l, h;
  auto rpow = [](const Rational& x, unsigned e) {
    Rational r;
    mpz_pow_ui(r.get_num_mpz_t(), x.get_num_mpz_t(), e);
    mpz_pow_ui(r.get_den_mpz_t(), x.get_den_mpz_t(), e);
    return r;
  };
  l = rpow(a.lo, k);
  h = rpow(a.hi, k);
  if (k % 2 == 1) return {l, h};
  if (a.lo >= 0) return {l, h};
  if (a.hi <= 0) return {h, l};
  return {Rational(0), std::max(l, h)};
}

Interval eval(const Polynomial& p, std::span<const Interval> coords) {
  if (p.is_zero()) return Interval(Rational(0));
  std::uint64_t sup = p.support();
  // Powers are cached per variable; Horner would be tighter but the terms
  // here are few.
  std::vector<std::vector<Interval>> powers(p.nvars());
  for (Var v = 0; v < p.nvars(); ++v) {
    if (!((sup >> v) & 1U)) continue;
    if (v >= coords.size()) throw std::invalid_argument("eval: missing coordinate");
    unsigned d = p.degree(v);
    powers[v].resize(d + 1);
    powers[v][0] = Interval(Rational(1));
    for (unsigned k = 1; k <= d; ++k) powers[v][k] = pow(coords[v], k);
  }
  Interval acc(Rational(0));
  for (std::size_t t = 0; t < p.size(); ++t) {
    Interval term(p.coeff(t));
    for (Var v = 0; v < p.nvars(); ++v) {
      unsigned e = p.exponent(t, v);
      if (e > 0) term = term * powers[v][e];
    }
    acc = acc + term;
  }
  return acc;
}

}  // namespace lieiso
