#pragma once

// Independent reference computations used only by the tests.

#include <random>
#include <vector>

#include "lieiso/polynomial.hpp"

namespace oracle {

using lieiso::Polynomial;
using lieiso::Rational;
using lieiso::Var;
using Matrix = std::vector<std::vector<Polynomial>>;

// Cofactor expansion along the first row; fine for the small sizes used here.
inline Polynomial det(const Matrix& m) {
  const std::size_t n = m.size();
  const auto& order = m[0][0].order();
  if (n == 1) return m[0][0];
  Polynomial acc(order);
  for (std::size_t c = 0; c < n; ++c) {
    if (m[0][c].is_zero()) continue;
    Matrix minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<Polynomial> row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != c) row.push_back(m[r][k]);
      minor.push_back(row);
    }
    Polynomial term = m[0][c] * det(minor);
    if (c % 2) acc -= term;
    else acc += term;
  }
  return acc;
}

// Rows: deg(Q)-j shifts of P, then deg(P)-j shifts of Q; column k = coefficient of v^(p+q-j-1-k).
inline Matrix subresultant_rows(const Polynomial& P, const Polynomial& Q, Var v, unsigned j) {
  unsigned p = P.degree(v), q = Q.degree(v);
  auto cp = P.coefficients(v), cq = Q.coefficients(v);
  unsigned width = p + q - j;
  Matrix rows;
  auto zero = Polynomial(P.order());
  for (unsigned s = 0; s < q - j; ++s) {
    std::vector<Polynomial> row(width, zero);
    // row represents v^(q-j-1-s) * P
    unsigned shift = q - j - 1 - s;
    for (unsigned k = 0; k <= p; ++k) row[width - 1 - (k + shift)] = cp[k];
    rows.push_back(row);
  }
  for (unsigned s = 0; s < p - j; ++s) {
    std::vector<Polynomial> row(width, zero);
    unsigned shift = p - j - 1 - s;
    for (unsigned k = 0; k <= q; ++k) row[width - 1 - (k + shift)] = cq[k];
    rows.push_back(row);
  }
  return rows;
}

inline Polynomial sylvester_resultant(const Polynomial& P, const Polynomial& Q, Var v) {
  return det(subresultant_rows(P, Q, v, 0));
}

// Determinant polynomial of the j-th subresultant matrix.
inline Polynomial subresultant(const Polynomial& P, const Polynomial& Q, Var v, unsigned j) {
  Matrix rows = subresultant_rows(P, Q, v, j);
  const std::size_t n = rows.size();  // p+q-2j
  const std::size_t width = rows[0].size();  // p+q-j
  Polynomial acc(P.order());
  for (unsigned i = 0; i <= j; ++i) {
    Matrix m;
    for (const auto& row : rows) {
      std::vector<Polynomial> r(row.begin(), row.begin() + (n - 1));
      r.push_back(row[width - 1 - i]);
      m.push_back(r);
    }
    acc += det(m).shifted(v, i);
  }
  return acc;
}

// Random polynomial with small integer coefficients.
inline Polynomial random_poly(std::mt19937_64& rng, const lieiso::VarOrderPtr& order,
                              unsigned terms, unsigned max_deg, int coef = 5) {
  std::uniform_int_distribution<int> c(-coef, coef);
  std::uniform_int_distribution<unsigned> e(0, max_deg);
  Polynomial p(order);
  for (unsigned t = 0; t < terms; ++t) {
    std::vector<unsigned> ex(order->size());
    for (auto& x : ex) x = e(rng);
    p += Polynomial::monomial(order, ex, c(rng));
  }
  return p;
}

}  // namespace oracle

namespace oracle {

// Dense univariate polynomial over Q, index = power.
using Dense = std::vector<Rational>;

inline void trim(Dense& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline Dense rem(Dense a, const Dense& b) {
  trim(a);
  while (a.size() >= b.size() && !a.empty()) {
    Rational f = a.back() / b.back();
    std::size_t shift = a.size() - b.size();
    for (std::size_t i = 0; i < b.size(); ++i) a[i + shift] -= f * b[i];
    trim(a);
  }
  return a;
}

inline Rational horner(const Dense& a, const Rational& x) {
  Rational acc = 0;
  for (std::size_t k = a.size(); k-- > 0;) acc = acc * x + a[k];
  return acc;
}

// Number of distinct real roots in (lo, hi] by Sturm's theorem.
inline int sturm_count(Dense p, const Rational& lo, const Rational& hi) {
  trim(p);
  if (p.size() <= 1) return 0;
  std::vector<Dense> seq{p};
  Dense d;
  for (std::size_t k = 1; k < p.size(); ++k) d.push_back(p[k] * static_cast<long>(k));
  trim(d);
  while (!d.empty()) {
    seq.push_back(d);
    Dense r = rem(seq[seq.size() - 2], d);
    for (auto& c : r) c = -c;
    d = r;
  }
  auto variations = [&](const Rational& x) {
    int v = 0, last = 0;
    for (const auto& s : seq) {
      int sg = sgn(horner(s, x));
      if (sg == 0) continue;
      if (last != 0 && sg != last) ++v;
      last = sg;
    }
    return v;
  };
  return variations(lo) - variations(hi);
}

}  // namespace oracle
