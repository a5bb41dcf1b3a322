#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace lieiso::detail {

// Determinant by Laplace expansion along rows, memoized on column subsets.
// Only ring operations are used, so it works for polynomial entries and for
// elements of an algebraic extension alike. O(n 2^n) products.
template <class T, class Mul, class Add, class Neg>
T subset_det(const std::vector<std::vector<T>>& m, const T& one, Mul mul, Add add, Neg neg) {
  const std::size_t n = m.size();
  // minors[mask]: rows n-|mask|..n-1 restricted to the columns in mask
  std::vector<std::optional<T>> minors(std::size_t{1} << n);
  minors[0] = one;
  for (std::size_t mask = 1; mask < minors.size(); ++mask) {
    std::size_t row = n - static_cast<std::size_t>(__builtin_popcountll(mask));
    std::optional<T> acc;
    std::size_t pos = 0;
    for (std::size_t c = 0; c < n; ++c) {
      if (!((mask >> c) & 1U)) continue;
      T term = mul(m[row][c], *minors[mask & ~(std::size_t{1} << c)]);
      if (pos % 2) term = neg(term);
      acc = acc ? add(*acc, term) : term;
      ++pos;
    }
    minors[mask] = acc;
  }
  return *minors.back();
}

}  // namespace lieiso::detail
