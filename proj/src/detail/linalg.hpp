#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "lieiso/lie.hpp"

// Exact linear algebra over Q on coordinate vectors.
namespace lieiso::detail {

using Vec = std::vector<Rational>;
/// c[i][j] = coordinates of [e_i, e_j].
using Table = std::vector<std::vector<Vec>>;

// Row-reduced basis of the span.
inline std::vector<Vec> span_basis(std::vector<Vec> vs) {
  std::vector<Vec> basis;
  std::vector<std::size_t> pivots;
  for (auto v : vs) {
    for (std::size_t b = 0; b < basis.size(); ++b) {
      Rational c = v[pivots[b]];
      if (c != 0)
        for (std::size_t k = 0; k < v.size(); ++k) v[k] -= c * basis[b][k];
    }
    std::size_t p = 0;
    while (p < v.size() && v[p] == 0) ++p;
    if (p == v.size()) continue;
    Rational inv = 1 / v[p];
    for (auto& x : v) x *= inv;
    for (std::size_t b = 0; b < basis.size(); ++b) {
      Rational c = basis[b][p];
      if (c != 0)
        for (std::size_t k = 0; k < v.size(); ++k) basis[b][k] -= c * v[k];
    }
    basis.push_back(v);
    pivots.push_back(p);
  }
  return basis;
}

inline Table constant_table(const LieAlgebra& L) {
  const std::size_t n = L.dim();
  Table c(n, std::vector<Vec>(n, Vec(n)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      auto b = L.bracket(i, j);
      for (std::size_t s = 0; s < n; ++s) {
        if (!b[s].is_constant()) throw std::invalid_argument("structure constants depend on parameters");
        c[i][j][s] = b[s].constant_value();
      }
    }
  return c;
}

inline Vec bracket_vec(const Table& c, const Vec& u, const Vec& v) {
  const std::size_t n = u.size();
  Vec out(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (u[i] == 0) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (v[j] == 0) continue;
      Rational w = u[i] * v[j];
      for (std::size_t s = 0; s < n; ++s)
        if (c[i][j][s] != 0) out[s] += w * c[i][j][s];
    }
  }
  return out;
}

inline std::vector<Vec> bracket_spaces(const Table& c, const std::vector<Vec>& A,
                                const std::vector<Vec>& B) {
  std::vector<Vec> out;
  for (const auto& a : A)
    for (const auto& b : B) out.push_back(bracket_vec(c, a, b));
  return span_basis(out);
}


/// Solutions x of r . x = 0 for every row r (vectors of length n).
inline std::vector<Vec> nullspace(const std::vector<Vec>& rows, std::size_t n) {
  auto R = span_basis(rows);
  std::vector<std::size_t> pivots;
  for (const auto& r : R) {
    std::size_t p = 0;
    while (r[p] == 0) ++p;
    pivots.push_back(p);
  }
  std::vector<Vec> out;
  for (std::size_t f = 0; f < n; ++f) {
    if (std::find(pivots.begin(), pivots.end(), f) != pivots.end()) continue;
    Vec x(n);
    x[f] = 1;
    for (std::size_t b = 0; b < R.size(); ++b) x[pivots[b]] = -R[b][f];
    out.push_back(x);
  }
  return span_basis(out);
}

/// Functionals vanishing on span(U), as coordinate vectors.
inline std::vector<Vec> annihilator(const std::vector<Vec>& U, std::size_t n) { return nullspace(U, n); }

inline std::vector<Vec> subspace_sum(std::vector<Vec> A, const std::vector<Vec>& B) {
  A.insert(A.end(), B.begin(), B.end());
  return span_basis(A);
}

inline std::vector<Vec> subspace_intersection(const std::vector<Vec>& A, const std::vector<Vec>& B, std::size_t n) {
  auto rows = annihilator(A, n);
  auto more = annihilator(B, n);
  rows.insert(rows.end(), more.begin(), more.end());
  return nullspace(rows, n);
}

}  // namespace lieiso::detail
