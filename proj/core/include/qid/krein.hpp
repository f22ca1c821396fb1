#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "qid/model.hpp"
#include "qid/triplet.hpp"
#include "qid/winding.hpp"

namespace qid {

/// F(z) = p e^{i x0 z} + A(z) with a single atom and an integrable remainder,
/// possibly signed. This is the input class of the Krein extraction.
struct AtomicTransform {
  double atom_mass = 1.0;
  double atom_location = 0.0;
  /// Transform of the remainder, weight included; empty when there is none.
  std::function<cplx(double)> ac;
  std::function<std::vector<cplx>(double, double, std::size_t)> ac_grid;
  /// |A(z)| <= ac_tv / |z|.
  double ac_tv = 0.0;
  /// Width of the region carrying the remainder's mass.
  double x_spread = 1.0;

  bool has_ac() const { return static_cast<bool>(ac); }
  cplx charfn(double z) const;
  std::vector<cplx> charfn_grid(double z0, double dz, std::size_t n) const;
};

/// Requires exactly one atom.
AtomicTransform atomic_transform(const Distribution& dist);

struct KreinOptions {
  std::size_t n_points = std::size_t{1} << 16;
  /// Fixes the transform band instead of the adaptive ladder.
  std::optional<double> z_max;
  /// Ladder stops once |F/p - 1| is below this on the outer half of the band.
  double band_tol = 1e-8;
  double z_cap = 1024.0;
  RefineConfig refine;
};

struct KreinReport {
  QuasiLevyTriplet triplet;
  /// sup |Im g| over the tabulation window.
  double im_residual = 0.0;
  /// sup |reconstructed - mu-hat| over the band.
  double recon_error = 0.0;
  /// lim h(z) as |z| -> inf, i.e. log p up to 2 pi i k.
  cplx q_est{};
  /// Mean |h - q_est| over the outer 5% of the band.
  double tail_residual = 0.0;
  /// Integral of |g| outside the tabulation window.
  double truncated_mass = 0.0;
  WindingResult winding;
  double z_winding = 0.0;
  std::size_t n_winding = 0;
  double z_max = 0.0;
  std::size_t n_points = 0;
  double dx = 0.0;
  double x_window = 0.0;
};

/// Q(0) Q(z)^{-1} with Q(z) = ((z - i)/(z + i))^m, evaluated as exp(-2im atan z).
std::vector<cplx> q_correction(std::span<const double> z, int m);

/// Complex quasi-Levy density on the tabulation window plus the origin terms.
struct ExtractedDensity {
  double x0 = 0.0;
  double dx = 0.0;
  std::vector<cplx> g;
  double origin_jump = 0.0;
  double origin_kink = 0.0;
  int index = 0;
  WindingResult winding;
  double z_winding = 0.0;
  std::size_t n_winding = 0;
  cplx q_est{};
  double tail_residual = 0.0;
  double truncated_mass = 0.0;
  double z_max = 0.0;
  std::size_t n_points = 0;
  double x_window = 0.0;
};

ExtractedDensity extract_g(const AtomicTransform& f, const KreinOptions& opt = {});
ExtractedDensity extract_g(const Distribution& dist, const KreinOptions& opt = {});

/// Triplet with a = 0 and drift at the atom. Throws NumericalError when the
/// imaginary residual exceeds 1e-4.
KreinReport assemble_triplet(const AtomicTransform& f, const KreinOptions& opt = {});
KreinReport assemble_triplet(const Distribution& dist, const KreinOptions& opt = {});

double im_residual(std::span<const cplx> g);

/// Transform band chosen by the ladder 64, 128, ..., z_cap.
double select_band(const AtomicTransform& f, const KreinOptions& opt);

}  // namespace qid
