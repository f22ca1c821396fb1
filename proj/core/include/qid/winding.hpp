#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "qid/model.hpp"

namespace qid {

using Evaluator = std::function<cplx(double)>;

/// Continuous logarithm samples: exp(values[j]) = F(z[j]).
struct LogGrid {
  std::vector<double> z;
  std::vector<cplx> values;
};

struct RefineConfig {
  /// Bisect an interval while |F(b)/F(a) - 1| exceeds this.
  double ratio_limit = 0.5;
  int max_depth = 20;
  /// Smallest |F| accepted anywhere on the path.
  double min_modulus = 1e-8;
};

/// Continuous argument along sorted nodes z, pinned to arg F(0) in (-pi, pi]
/// at z = 0. Intervals with large steps are bisected through `eval`.
/// Throws RefinementError when the bisection budget runs out, NumericalError
/// when |F| drops below cfg.min_modulus.
std::vector<double> continuous_arg(std::span<const double> z, std::span<const cplx> f, const Evaluator& eval,
                                   const RefineConfig& cfg = {});

/// Distinguished logarithm of a sampled characteristic function.
LogGrid distinguished_log(const CharFunctionGrid& grid, const Evaluator& eval, const RefineConfig& cfg = {});

struct WindingResult {
  int index = 0;
  /// Estimate before rounding.
  double raw = 0.0;
};

/// Index of F over the line from tail averages of its continuous argument.
/// Throws NumericalError when the estimate is not within 0.05 of an integer.
WindingResult winding_index(const CharFunctionGrid& grid, const Evaluator& eval, const RefineConfig& cfg = {});

/// Index of mu-hat for a law with a single atom; the atom's phase e^{i x0 z}
/// is removed first so the curve settles at the atom mass.
WindingResult winding_index(const CharFunctionGrid& grid, const Distribution& dist, const RefineConfig& cfg = {});

/// CSV with header "z,re,im".
void write_csv(std::ostream& out, const LogGrid& grid);

}  // namespace qid
