#pragma once

#include <optional>
#include <span>
#include <string>

#include "lieiso/polynomial.hpp"

namespace lieiso {

/// Closed rational interval [lo, hi].
struct Interval {
  Rational lo;
  Rational hi;

  Interval() = default;
  Interval(const Rational& v) : lo(v), hi(v) {}  // NOLINT: points convert implicitly
  Interval(const Rational& l, const Rational& h) : lo(l), hi(h) {}

  bool is_point() const { return lo == hi; }
  bool contains(const Rational& x) const { return lo <= x && x <= hi; }
  bool contains_zero() const { return lo <= 0 && hi >= 0; }
  Rational width() const { return hi - lo; }
  /// Sign shared by every element, if any.
  std::optional<int> sign() const;
  std::string to_string() const;
};

Interval operator+(const Interval& a, const Interval& b);
Interval operator-(const Interval& a, const Interval& b);
Interval operator-(const Interval& a);
Interval operator*(const Interval& a, const Interval& b);
Interval pow(const Interval& a, unsigned k);

/// Enclosure of p over the box; coords is indexed by variable rank and must
/// cover every variable occurring in p.
Interval eval(const Polynomial& p, std::span<const Interval> coords);

}  // namespace lieiso
