#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lieiso/projection.hpp"

namespace lieiso {

/// Finite-dimensional Lie algebra given by structure constants over Q, possibly
/// depending polynomially on parameters.
struct LieAlgebra {
  std::vector<std::string> basis;   // e1..en unless stated otherwise
  std::vector<std::string> params;  // in declaration order
  VarOrderPtr order;                // the parameters
  /// [e_i, e_j] for i < j (0-based) as coordinates in the basis; absent = 0.
  std::map<std::pair<std::size_t, std::size_t>, std::vector<Polynomial>> table;
  /// Parameter constraints: F0 = 0, N0 >= 0, P0 > 0, H0 != 0.
  std::vector<Polynomial> F0, N0, P0, H0;

  std::size_t dim() const { return basis.size(); }
  /// Coordinates of [e_i, e_j] for any i, j.
  std::vector<Polynomial> bracket(std::size_t i, std::size_t j) const;
  /// Sets [e_i, e_j] (and implicitly [e_j, e_i]); zero vectors are dropped.
  void set_bracket(std::size_t i, std::size_t j, std::vector<Polynomial> coords);
};

/// n-dimensional algebra with the given parameters and no brackets.
LieAlgebra make_algebra(std::size_t n, std::vector<std::string> params = {});

struct Validation {
  bool ok = true;
  std::vector<std::string> residuals;  // "i,j,k: component s = poly"
};

/// Jacobi identity modulo the constraint equations, plus table well-formedness.
Validation validate(const LieAlgebra& L);

/// Isomorphism equations: bracket compatibility of phi(e_i) = sum_s z_is e'_s plus
/// 1 - z det, over variables params(L) < params(L') < z_nn < ... < z_11 < z.
struct IsoSystem {
  VarOrderPtr order;
  std::size_t n = 0;
  std::size_t param_count = 0;            // lowest variables of the order
  std::vector<std::string> left_params;   // after renaming
  std::vector<std::string> right_params;
  std::vector<Polynomial> equations;      // bracket equations then 1 - z det, then F0, F1
  std::size_t bracket_equations = 0;
  std::vector<Polynomial> N, P, H;        // merged side conditions
  Var z_var = 0;

  Var z(std::size_t i, std::size_t s) const;  // variable of entry (row s, column i), 0-based
  SAS as_sas() const { return SAS{order, equations, N, P, H}; }
};

/// Throws std::invalid_argument on a dimension mismatch.
IsoSystem iso_system(const LieAlgebra& L, const LieAlgebra& Lp);

/// Gauss-eliminates the equations that are linear with rational coefficients
/// in the unknowns, repeatedly. The variety is unchanged; pivot equations
/// express the highest unknown of each row in lower ones.
std::vector<Polynomial> eliminate_linear(const std::vector<Polynomial>& F, std::size_t param_count);

// Algebraic numbers in a single generator theta, root of a squarefree
// modulus m. Elements are polynomials in theta of degree < deg m.

/// Square matrix whose entries lie in Q(theta). Without a modulus every entry is rational.
struct AlgebraicMatrix {
  std::size_t n = 0;
  DenseInt modulus;                       // empty: no theta
  std::optional<RootInterval> real_root;  // theta is the real root of the modulus isolated here
  /// entries[row][col], coefficient vectors in theta (index = power).
  std::vector<std::vector<std::vector<Rational>>> entries;

  bool rational() const { return modulus.empty(); }
  /// Entry as a rational; requires rational().
  Rational at(std::size_t row, std::size_t col) const;
  std::string entry_string(std::size_t row, std::size_t col, const std::string& theta = "t") const;
  std::string to_string() const;
  static AlgebraicMatrix from_rationals(const std::vector<std::vector<Rational>>& m);
  /// Entries as polynomials in the single variable theta.
  static AlgebraicMatrix from_theta(const std::vector<std::vector<std::string>>& m, const std::string& modulus,
                                    std::optional<RootInterval> real_root = std::nullopt);
};

/// phi([X_i, X_j]) = [phi X_i, phi X_j] for all i < j and det != 0, where
/// phi(X_i) = sum_s M[s][i] Y_s. Parameter-free algebras only. Exact in
/// Q(theta); with a complex theta the checks hold for every root of the modulus.
bool verify_isomorphism(const LieAlgebra& L, const LieAlgebra& Lp, const AlgebraicMatrix& M);

enum class Field { Complex, Real };
std::string to_string(Field f);

struct InvariantReport {
  bool distinguished = false;
  std::string reason;
};

/// Dimensions of the derived series, the lower central series and the center.
struct Invariants {
  std::vector<std::size_t> derived, lower_central;
  std::size_t center = 0;
};
Invariants invariants(const LieAlgebra& L);
InvariantReport invariant_prefilter(const LieAlgebra& L, const LieAlgebra& Lp);

enum class IsoStatus { Isomorphic, NotIsomorphic, Unknown };
std::string to_string(IsoStatus s);

struct IsoVerdict {
  IsoStatus status = IsoStatus::Unknown;
  Field field = Field::Complex;
  std::optional<AlgebraicMatrix> matrix;  // always verified when present
  std::string evidence;
};

struct IsoOptions {
  Budget budget;
  RealOptions real;
  bool prefilter = true;
  bool linear_elimination = true;
  /// Rewrite both algebras in bases adapted to their characteristic subspaces
  /// and add the induced linear conditions (parameter-free inputs only).
  bool adapted_basis = true;
  /// Retry an undecided pair with the algebras swapped.
  bool try_reverse = true;
};

IsoVerdict is_isomorphic_complex(const LieAlgebra& L, const LieAlgebra& Lp, const IsoOptions& options = {});
IsoVerdict is_isomorphic_real(const LieAlgebra& L, const LieAlgebra& Lp, const IsoOptions& options = {});

/// Witness from a regular system of the iso system: free unknowns get small
/// rational values avoiding the initials and inequations, then the chain is
/// solved level by level. nullopt when no verified matrix was found.
std::optional<AlgebraicMatrix> extract_isomorphism(const LieAlgebra& L, const LieAlgebra& Lp, const IsoSystem& sys,
                                                   const RegularSystem& rs, Field field, unsigned attempts = 32);

/// Parameter values (params of L then of L') for which the algebras are isomorphic.
ConstructibleSet param_iso_complex(const LieAlgebra& L, const LieAlgebra& Lp, const IsoOptions& options = {});
RealRegion param_iso_real(const LieAlgebra& L, const LieAlgebra& Lp, const RealProjectionOptions& projection = {},
                          const IsoOptions& options = {});

/// The algebra in a new basis: e'_i = sum_k P[k][i] e_k (P invertible, rational).
LieAlgebra change_basis(const LieAlgebra& L, const std::vector<std::vector<Rational>>& P);

/// Parser for the .lie text format; errors carry 1-based line and column.
class LieParseError : public std::runtime_error {
 public:
  LieParseError(const std::string& msg, std::size_t line, std::size_t column)
      : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg),
        line_(line),
        column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_, column_;
};

LieAlgebra parse_lie(std::string_view text);
std::string print_lie(const LieAlgebra& L);

}  // namespace lieiso
