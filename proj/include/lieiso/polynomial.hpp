#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lieiso/rational.hpp"

namespace lieiso {

/// Variable identifier: its rank in the order, 0 being the smallest variable.
using Var = std::size_t;
using Exponent = std::uint16_t;

/// Totally ordered set of variable names; later names rank higher.
class VarOrder {
 public:
  static constexpr std::size_t kMaxVars = 64;

  explicit VarOrder(std::vector<std::string> names);

  std::size_t size() const { return names_.size(); }
  const std::string& name(Var v) const { return names_.at(v); }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<Var> find(std::string_view name) const;
  Var at(std::string_view name) const;

 private:
  std::vector<std::string> names_;
};

using VarOrderPtr = std::shared_ptr<const VarOrder>;

VarOrderPtr make_order(std::vector<std::string> names);

class OrderMismatch : public std::logic_error {
 public:
  OrderMismatch() : std::logic_error("polynomials belong to different variable orders") {}
};

/// Sparse multivariate polynomial over Q. Terms are kept sorted in
/// descending lexicographic order with respect to the variable order, no
/// stored coefficient is zero, so equal polynomials have equal
/// representations.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(VarOrderPtr order) : order_(std::move(order)) {}
  Polynomial(VarOrderPtr order, const Rational& c);

  static Polynomial variable(VarOrderPtr order, Var v, unsigned degree = 1);
  /// Monomial from exponents indexed by variable rank.
  static Polynomial monomial(VarOrderPtr order, std::span<const unsigned> exps, const Rational& c);

  const VarOrderPtr& order() const { return order_; }
  std::size_t nvars() const { return order_ ? order_->size() : 0; }

  std::size_t size() const { return coefs_.size(); }
  bool is_zero() const { return coefs_.empty(); }
  bool is_constant() const;
  /// Value of a constant polynomial (zero for the zero polynomial).
  Rational constant_value() const;
  /// Constant term (coefficient of the unit monomial).
  Rational constant_term() const;

  const Rational& coeff(std::size_t term) const { return coefs_[term]; }
  Exponent exponent(std::size_t term, Var v) const {
    return exps_[term * nvars() + (nvars() - 1 - v)];
  }

  /// Greatest variable occurring in the polynomial. Requires !is_constant().
  Var mvar() const;
  unsigned degree(Var v) const;
  unsigned total_degree() const;
  /// Bit v is set iff variable v occurs.
  std::uint64_t support() const;
  bool involves(Var v) const { return (support() >> v) & 1U; }

  /// Coefficient of v^k, as a polynomial free of v.
  Polynomial coeff_in(Var v, unsigned k) const;
  /// All coefficients w.r.t. v, index = power.
  std::vector<Polynomial> coefficients(Var v) const;
  /// Leading coefficient w.r.t. v (the polynomial itself if v does not occur).
  Polynomial lcoeff(Var v) const;
  /// Coefficient of the lexicographically leading term.
  const Rational& leading_numeric() const;

  Polynomial operator-() const;
  Polynomial& operator+=(const Polynomial& q);
  Polynomial& operator-=(const Polynomial& q);
  Polynomial& operator*=(const Polynomial& q);
  friend Polynomial operator+(Polynomial p, const Polynomial& q) { return p += q; }
  friend Polynomial operator-(Polynomial p, const Polynomial& q) { return p -= q; }
  friend Polynomial operator*(const Polynomial& p, const Polynomial& q);
  friend bool operator==(const Polynomial& p, const Polynomial& q);
  friend bool operator!=(const Polynomial& p, const Polynomial& q) { return !(p == q); }

  Polynomial scaled(const Rational& c) const;
  /// Multiplies by v^k.
  Polynomial shifted(Var v, unsigned k) const;
  Polynomial pow(unsigned e) const;

  /// Exact substitution of rational values; unbound variables stay symbolic.
  Polynomial evaluate(const std::map<Var, Rational>& bindings) const;
  /// Substitutes q for v.
  Polynomial substitute(Var v, const Polynomial& q) const;
  Polynomial derivative(Var v) const;

  /// Same polynomial expressed over another order containing all used names.
  Polynomial rebase(const VarOrderPtr& target) const;

  /// Total order on polynomials (by size, then terms); used for canonical sorting.
  static int compare(const Polynomial& a, const Polynomial& b);
  std::size_t hash() const;

  std::string to_string() const;

 private:
  friend class PolyBuilder;
  std::span<const Exponent> row(std::size_t term) const {
    return {exps_.data() + term * nvars(), nvars()};
  }
  void check_same(const Polynomial& q) const;
  void adopt(const Polynomial& q);

  VarOrderPtr order_;
  // Row-major exponent matrix; slot s of a row stores the exponent of
  // variable nvars()-1-s, so plain lexicographic comparison of rows is the
  // term order.
  std::vector<Exponent> exps_;
  std::vector<Rational> coefs_;
};

/// Parse error with a 1-based column.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, std::size_t column)
      : std::runtime_error(msg + " at column " + std::to_string(column)), column_(column) {}
  std::size_t column() const { return column_; }

 private:
  std::size_t column_;
};

/// Grammar: integers, rationals a/b, identifiers, + - * ^, parentheses.
/// Every identifier must be a variable of `order`.
Polynomial parse_polynomial(std::string_view text, const VarOrderPtr& order);

/// Identifiers appearing in `text`, in order of first appearance.
std::vector<std::string> identifiers_in(std::string_view text);

/// Positive leading coefficient, integer coefficients with gcd 1.
Polynomial normalize(const Polynomial& p);

std::ostream& operator<<(std::ostream& os, const Polynomial& p);

struct PolynomialLess {
  bool operator()(const Polynomial& a, const Polynomial& b) const {
    return Polynomial::compare(a, b) < 0;
  }
};

}  // namespace lieiso
