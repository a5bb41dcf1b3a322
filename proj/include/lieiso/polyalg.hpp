#pragma once

#include <optional>
#include <span>
#include <vector>

#include "lieiso/polynomial.hpp"

namespace lieiso {

struct RankedView {
  Var mvar;
  unsigned mdeg;
  Polynomial init;
  Polynomial tail;
};

/// Throws std::invalid_argument on constant input.
RankedView ranked_view(const Polynomial& p);

/// Leading coefficient w.r.t. the main variable. Requires a non-constant p.
Polynomial init_of(const Polynomial& p);

/// Derivative w.r.t. the main variable. Throws on constant input.
Polynomial derivative(const Polynomial& p);

struct PremResult {
  Polynomial r;
  unsigned e = 0;
  Polynomial q;
};

/// init_v(t)^e * p = q*t + r, deg_v r < deg_v t, e as small as the greedy
/// division allows (leading coefficients divisible by the initial cost nothing).
PremResult pseudo_remainder(const Polynomial& p, const Polynomial& t, Var v);

/// Remainder part of pseudo_remainder only.
Polynomial prem(const Polynomial& p, const Polynomial& t, Var v);

/// Classical pseudo-remainder with exponent deg_v p - deg_v t + 1.
Polynomial prem_full(const Polynomial& p, const Polynomial& t, Var v);

/// Pseudo-quotient matching prem().
Polynomial pquo(const Polynomial& p, const Polynomial& t, Var v);

/// Exact division; nullopt when d does not divide p.
std::optional<Polynomial> try_divide(const Polynomial& p, const Polynomial& d);
/// Exact division; throws std::domain_error when d does not divide p.
Polynomial exact_divide(const Polynomial& p, const Polynomial& d);

/// Resultant w.r.t. v, sign fixed by the Sylvester matrix with the rows of p first.
Polynomial resultant(const Polynomial& p, const Polynomial& q, Var v);

/// Subresultant chain of p, q w.r.t. v for deg_v p > deg_v q >= 1.
/// Entry j holds S_j (zero for vanishing ones), for j = 0..deg_v q.
std::vector<Polynomial> subresultant_chain(const Polynomial& p, const Polynomial& q, Var v);

/// Principal subresultant coefficient s_j: coefficient of v^j in S_j.
Polynomial principal_coefficient(const std::vector<Polynomial>& chain, std::size_t j, Var v);

/// Iterated resultant of p w.r.t. a triangular set sorted by ascending mvar.
Polynomial res_chain(const Polynomial& p, std::span<const Polynomial> chain);
/// res_chain(p, chain) != 0, decided on a specialization first when possible.
bool res_chain_nonzero(const Polynomial& p, std::span<const Polynomial> chain);

/// Top-down pseudo-reduction by a triangular set sorted by ascending mvar.
Polynomial reduce(const Polynomial& p, std::span<const Polynomial> chain);

/// Normalized gcd (positive leading coefficient, primitive over Z).
Polynomial gcd(const Polynomial& p, const Polynomial& q);

/// Gcd of the coefficients of p viewed in v.
Polynomial content(const Polynomial& p, Var v);
Polynomial primitive_part(const Polynomial& p, Var v);

Polynomial squarefree_primitive_part(const Polynomial& p, Var v);

/// Squarefree part of a polynomial (over all variables, content included).
Polynomial squarefree_part(const Polynomial& p);

/// Largest monomial dividing every term, as an exponent vector indexed by rank.
std::vector<unsigned> monomial_content(const Polynomial& p);

/// Distinct rational roots, increasing, of a polynomial univariate in v.
std::vector<Rational> rational_roots(const Polynomial& p, Var v);

}  // namespace lieiso
