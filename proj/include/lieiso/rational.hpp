#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>

namespace lieiso {

using Integer = mpz_class;
using Rational = mpq_class;

/// Parses "a" or "a/b" (optional leading sign). Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& q);

inline int sign(const Rational& q) { return sgn(q); }

/// Midpoint of [lo, hi]; dyadic whenever both endpoints are.
inline Rational midpoint(const Rational& lo, const Rational& hi) {
  Rational m = lo + hi;
  m /= 2;
  return m;
}

/// Approximate decimal rendering used for human-readable witnesses.
std::string to_decimal(const Rational& q, int digits = 12);

}  // namespace lieiso
