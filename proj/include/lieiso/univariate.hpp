#pragma once

#include <vector>

#include "lieiso/polynomial.hpp"

namespace lieiso {

/// Dense integer coefficients, index = power.
using DenseInt = std::vector<Integer>;

/// Primitive integer coefficients of p, which must involve no variable but v.
DenseInt to_dense(const Polynomial& p, Var v);
Polynomial from_dense(const DenseInt& c, const VarOrderPtr& order, Var v);

/// Sign of c at x.
int sign_at(const DenseInt& c, const Rational& x);
Rational eval_dense(const DenseInt& c, const Rational& x);

/// Real root enclosure. Either lo == hi (an exact rational root) or the
/// polynomial has exactly one root in (lo, hi) and is nonzero at both ends.
struct RootInterval {
  Rational lo;
  Rational hi;
  bool exact() const { return lo == hi; }
};

/// Squarefree part of a dense polynomial (primitive, positive leading coefficient).
DenseInt squarefree_dense(const DenseInt& c);

/// Isolating intervals of the distinct real roots, in increasing order.
/// Endpoints are dyadic.
std::vector<RootInterval> isolate_real_roots(const DenseInt& c);

/// Bisects iv until hi - lo <= width. sqfree must be squarefree and iv one of
/// its isolating intervals.
void refine_root(const DenseInt& sqfree, RootInterval& iv, const Rational& width);

/// Rational with the smallest denominator in [lo, hi] (lo <= hi).
Rational simplest_between(const Rational& lo, const Rational& hi);

}  // namespace lieiso
