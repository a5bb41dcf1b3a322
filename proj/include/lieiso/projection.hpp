#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lieiso/realsolve.hpp"

namespace lieiso {

// Parameters are always the lowest `params` variables of the order.

/// V(equations) minus V(product of inequations), over the parameters.
struct ConstructibleBlock {
  std::vector<Polynomial> equations;
  std::vector<Polynomial> inequations;
};

/// Finite union of blocks; no blocks means the empty set.
struct ConstructibleSet {
  VarOrderPtr order;
  std::size_t params = 0;
  std::vector<ConstructibleBlock> blocks;

  std::string to_string() const;
};

/// Image of V(F) minus V(prod H) under projection onto the first r variables.
ConstructibleSet project_complex(const VarOrderPtr& order, const std::vector<Polynomial>& F,
                                 const std::vector<Polynomial>& H, std::size_t r, const Budget& budget = {});

enum class CellStatus { In, Out, Unknown };
std::string to_string(CellStatus s);

/// Cell of a real region: E = 0, N >= 0, P > 0, U != 0 over the parameters.
struct RealCell {
  std::vector<Polynomial> equations, nonnegative, positive, inequations;
  std::vector<Rational> sample;  // empty when the cell has no rational point to test
  CellStatus status = CellStatus::Unknown;
  std::string provenance;
};

struct RealRegion {
  VarOrderPtr order;
  std::size_t params = 0;
  /// True when the cells partition parameter space (at most two parameters);
  /// otherwise every cell is a single sample point.
  bool cell_decomposition = false;
  std::vector<RealCell> cells;
};

struct RealProjectionOptions {
  RealOptions real;
  /// Extra parameter points to decide; in sample-only mode these are the cells.
  std::vector<std::vector<Rational>> samples;
  /// Pseudo-random sample points added in sample-only mode.
  unsigned random_samples = 16;
  /// Above this many cell-defining polynomials the cell mode falls back to samples.
  std::size_t max_cell_polys = 64;
};

/// Parameter points where the SAS has a real solution. Cells are labeled by
/// deciding the system at one rational sample; In is only claimed with a
/// certified witness and Out only with a certified emptiness proof.
RealRegion project_real(const SAS& S, std::size_t r, const RealProjectionOptions& options = {});

/// Exact evaluation at a rational parameter point.
bool membership(const std::vector<Rational>& point, const ConstructibleSet& set);
bool membership(const std::vector<Rational>& point, const ConstructibleBlock& block);

/// Status of the cell containing the point; Unknown when no cell contains it.
CellStatus membership(const std::vector<Rational>& point, const RealRegion& region);
bool in_cell(const std::vector<Rational>& point, const RealCell& cell);

/// The SAS with the first point.size() variables replaced by the point.
SAS instantiate(const SAS& S, const std::vector<Rational>& point);

}  // namespace lieiso
