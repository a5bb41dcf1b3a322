#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "lieiso/polynomial.hpp"

namespace lieiso {

/// Resource ceilings for elimination. Exceeding any of them raises BudgetExceeded.
struct Budget {
  std::size_t max_chains = 20000;        // live tasks + produced systems
  std::size_t max_bits = 1u << 16;        // coefficient size of chain polynomials
  std::size_t max_steps = 5'000'000;      // elementary reduction/splitting steps
};

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-constant polynomials with pairwise distinct main variables, sorted by
/// ascending main variable.
class TriangularSet {
 public:
  TriangularSet() = default;
  TriangularSet(VarOrderPtr order, std::vector<Polynomial> polys);

  const VarOrderPtr& order() const { return order_; }
  const std::vector<Polynomial>& polys() const { return polys_; }
  std::size_t size() const { return polys_.size(); }
  bool empty() const { return polys_.empty(); }
  const Polynomial& operator[](std::size_t i) const { return polys_[i]; }

  /// Element with main variable v, or nullptr.
  const Polynomial* with_mvar(Var v) const;
  /// Bit v set iff v is a main variable.
  std::uint64_t main_vars() const;
  std::vector<Polynomial> inits() const;
  /// Product of the initials (h_T).
  Polynomial init_product() const;

  std::string to_string() const;

 private:
  VarOrderPtr order_;
  std::vector<Polynomial> polys_;
};

class RegularChain {
 public:
  RegularChain() = default;
  RegularChain(TriangularSet base, bool squarefree) : base_(std::move(base)), squarefree_(squarefree) {}

  const TriangularSet& base() const { return base_; }
  const std::vector<Polynomial>& polys() const { return base_.polys(); }
  const VarOrderPtr& order() const { return base_.order(); }
  std::size_t size() const { return base_.size(); }
  bool squarefree() const { return squarefree_; }
  std::string to_string() const { return base_.to_string(); }

 private:
  TriangularSet base_;
  bool squarefree_ = true;
};

struct Decomposition {
  std::vector<RegularChain> chains;
};

/// Squarefree regular chain with inequations, each regular modulo sat(chain).
/// Zero set: W(chain) minus the zeros of the inequations.
struct RegularSystem {
  RegularChain chain;
  std::vector<Polynomial> inequations;
};

struct DecomposeOptions {
  /// Recognise w*h - c with w occurring nowhere else and treat it as h != 0.
  bool detect_auxiliary = true;
  /// Polynomials whose vanishing is decided on every output system.
  std::vector<Polynomial> classify;
  /// Used when neither F nor H carries a variable order.
  VarOrderPtr order;
};

struct ClassifiedSystem {
  RegularSystem system;
  /// One flag per DecomposeOptions::classify entry: true iff it vanishes on the system.
  std::vector<bool> vanishes;
};

/// p in sat(T), by pseudo-reduction.
bool sat_membership(const Polynomial& p, const RegularChain& T);

enum class Regularity { Regular, Zero, ZeroDivisor };

struct RegularityResult {
  Regularity status;
  std::vector<RegularChain> zero_branches;
  std::vector<RegularChain> regular_branches;
};

RegularityResult is_regular(const Polynomial& p, const RegularChain& T, const Budget& budget = {});

/// V(F) = union of the quasi-components of the output chains.
Decomposition triangularize(const std::vector<Polynomial>& F, const Budget& budget = {});

/// V(F) minus V(prod H) as a union of regular systems.
std::vector<RegularSystem> decompose(const std::vector<Polynomial>& F, const std::vector<Polynomial>& H,
                                     const Budget& budget = {}, const DecomposeOptions& options = {});

std::vector<ClassifiedSystem> decompose_classified(const std::vector<Polynomial>& F,
                                                   const std::vector<Polynomial>& H,
                                                   const Budget& budget, const DecomposeOptions& options);

/// Squarefree regular chains covering W(T).
std::vector<RegularChain> make_squarefree(const RegularChain& T, const Budget& budget = {});

std::size_t chain_dimension(const RegularChain& T);

/// Each init regular modulo the saturated ideal of the lower part.
bool is_regular_chain(const TriangularSet& T);
/// der(t) regular modulo sat(T) for every t.
bool is_squarefree_chain(const TriangularSet& T);

/// Same dimension and mutual sat-membership of all generators.
bool chain_equivalent(const RegularChain& a, const RegularChain& b);

/// Largest numerator/denominator bit length among the coefficients.
std::size_t coefficient_bits(const Polynomial& p);

}  // namespace lieiso
