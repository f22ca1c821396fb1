#pragma once

#include <cstddef>
#include <optional>

#include "qid/model.hpp"

namespace qid {

/// |f-hat(z)| <= bound_constant / |z| for |z| >= z_threshold.
struct TailBound {
  double z_threshold = 0.0;
  double bound_constant = 0.0;
};

struct TailCutoff {
  TailBound bound;
  /// Beyond this, |mu-hat| is bounded away from zero.
  double scan_limit = 0.0;
  /// min over one period of the normalised lattice characteristic function (1 for a single atom).
  double lattice_floor = 1.0;
};

/// mu-hat on the symmetric grid z_j = -z_max + j*2z_max/(n-1); n a power of two >= 1024.
CharFunctionGrid charfn_eval(const Distribution& dist, double z_max, std::size_t n_points);

/// Estimated spectral content of tabulated samples at their Nyquist frequency,
/// weighted by the ac weight. Infinite when z_max exceeds the Nyquist limit.
double aliasing_estimate(const Distribution& dist, double z_max);

/// TV(f)/|z|, valid for piecewise C^1 densities.
double riemann_lebesgue_bound(const Density& f, double z);

/// Scan limit Z such that ac_weight*TV(f)/|z| < p_tot * lattice_floor beyond Z.
TailCutoff tail_cutoff(const Distribution& dist);

struct ScanConfig {
  double z_scan_min = 64.0;
  double refine_tol = 1e-12;
  /// Required when the law has no atom; overrides the tail cutoff otherwise.
  std::optional<double> z_scan_max;
  /// Multiplies the scan density (2 doubles the resolution).
  double resolution = 1.0;
};

inline constexpr double kZeroThreshold = 1e-10;
inline constexpr double kIndeterminateCeiling = 1e-6;

/// Scans z >= 0 for zeros of mu-hat. Throws IndeterminateError when a refined
/// minimum lands in [1e-10, 1e-6].
ZeroCertificate find_zeros(const Distribution& dist, const ScanConfig& config = {});

/// Same scan for any Hermitian evaluator; `lipschitz` bounds |F'|.
ZeroCertificate find_zeros(const std::function<cplx(double)>& eval,
                           const std::function<std::vector<cplx>(double, double, std::size_t)>& eval_grid,
                           double z_end, double spacing, double lipschitz, double refine_tol);

/// Lattice (r, h) that all atoms sit on, or nullopt. A declared lattice wins.
std::optional<Lattice> infer_lattice(const Distribution& dist);

}  // namespace qid
