#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lieiso/chains.hpp"
#include "lieiso/interval.hpp"
#include "lieiso/univariate.hpp"

namespace lieiso {

/// Semi-algebraic system: F = 0, N >= 0, P > 0, H != 0.
struct SAS {
  VarOrderPtr order;
  std::vector<Polynomial> F, N, P, H;
};

/// One real point, each coordinate either exact or enclosed in an interval
/// that isolates a root of its defining squarefree univariate polynomial.
struct IsolatingBox {
  VarOrderPtr order;
  std::vector<Interval> coords;     // indexed by variable rank
  std::vector<DenseInt> defining;   // empty for exact coordinates

  bool exact(Var v) const { return coords[v].is_point(); }
  bool all_exact() const;
  /// Halves every inexact coordinate `rounds` times.
  void refine(unsigned rounds = 1);
  /// Exact values of the point coordinates; nullopt unless all_exact().
  std::optional<std::map<Var, Rational>> point() const;
};

struct RealOptions {
  unsigned refine_rounds = 256;  // bisections per certification
  unsigned samples = 64;         // free-variable samples per chain
  std::uint64_t seed = 1;
  Budget budget;
};

/// Real points of a zero-dimensional squarefree chain, after fixing the free
/// variables listed in `free_values` (which must be all of them).
struct RealPoints {
  bool complete = true;  // false when some candidate could not be decided
  std::string reason;
  std::vector<IsolatingBox> boxes;
};

RealPoints real_points_of_chain(const RegularChain& T, const std::vector<Polynomial>& H = {},
                                const RealOptions& options = {});
RealPoints real_points_of_chain(const RegularChain& T, const std::map<Var, Rational>& free_values,
                                const std::vector<Polynomial>& H, const RealOptions& options);

/// Sign of p at the point of the box, refining a copy as needed; nullopt when
/// the budget runs out.
std::optional<int> certified_sign(const Polynomial& p, IsolatingBox& box, unsigned rounds);

/// Re-checks that the box isolates a point of W(T): every chain polynomial has
/// a certified unique root in its coordinate and every initial is nonzero.
bool certify_box(const RegularChain& T, const IsolatingBox& box, unsigned rounds = 64);

enum class RealStatus { NonEmpty, Empty, Unknown };

struct RealVerdict {
  RealStatus status = RealStatus::Unknown;
  std::optional<IsolatingBox> witness;
  std::string reason;
};

RealVerdict sas_has_real_solution(const SAS& S, const RealOptions& options = {});

/// Primitive squarefree part of the product of res(der(t), T) and res(h, T).
/// Throws std::invalid_argument when some factor vanishes (not a regular system).
Polynomial border_polynomial(const RegularChain& T, const std::vector<Polynomial>& H);

std::string to_string(RealStatus s);

}  // namespace lieiso
