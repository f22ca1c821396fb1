#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "qid/krein.hpp"
#include "qid/model.hpp"

namespace qid {

/// Coefficients a_k at the points r + h k, k = k_min, k_min + 1, ...
struct LatticeSeries {
  double r = 0.0;
  double h = 1.0;
  long long k_min = 0;
  std::vector<cplx> coef;

  long long k_max() const { return k_min + static_cast<long long>(coef.size()) - 1; }
  cplx at(long long k) const;
  double l1_norm() const;
  /// sum_k a_k e^{i(r + hk)z}
  cplx eval(double z) const;
  /// Same series without the offset or step: sum_k a_k e^{ikw}.
  cplx eval_normalised(double w) const;
};

/// Series of the atoms of a lattice law (masses as given, not normalised).
LatticeSeries lattice_series(const Distribution& dist, const Lattice& lat);

/// Fourier series at each z.
std::vector<cplx> lattice_charfn(const LatticeSeries& s, std::span<const double> z);

struct InverseSeries {
  /// c_k at -r + h k, so that c-hat = 1 / s-hat.
  LatticeSeries c;
  /// ||s * c - delta_0||_1
  double residual = 0.0;
  std::size_t n_fft = 0;
  double truncation_tol = 0.0;
};

/// Wiener-lemma inverse. Throws PeriodZeroError when the series vanishes on
/// its period and NumericalError when the residual stays above 1e-8 after
/// doubling n_fft twice.
InverseSeries wiener_invert(const LatticeSeries& s, std::size_t n_fft = 4096, double tol = 1e-14);

struct LatticeTriplet {
  /// Winding over one period; the drift of the lattice law is r + n h.
  int n = 0;
  /// b_k at h k, k != 0 (index k_min..), real parts.
  LatticeSeries b;
  double max_imag = 0.0;
  /// sup over the period of |reconstruction - s-hat|.
  double recon_error = 0.0;
  std::size_t n_fft = 0;
};

/// Requires a probability series (coefficients sum to 1).
LatticeTriplet lattice_triplet(const LatticeSeries& s, std::size_t n_fft = 4096, double tol = 1e-14);

/// mu = pi_d * (q delta_0 + (1 - q) c * f): pi_d is the lattice part renormalised
/// to a probability, q its mass, c the inverse of pi_d and f the ac density.
struct MixedDecomposition {
  LatticeSeries lattice;
  double lattice_mass = 0.0;
  InverseSeries inverse;
  /// Companion law q delta_0 + (1 - q) c * f as an atomic transform.
  AtomicTransform companion;
  /// Density of the companion's signed ac part.
  std::function<double(double)> companion_density;
  /// sup |mu-hat - pi_d-hat * companion-hat| on the check grid.
  double identity_error = 0.0;
};

MixedDecomposition mixed_decompose(const Distribution& dist, const std::optional<Lattice>& lattice = std::nullopt);

/// CSV "k,re,im" for the coefficients.
void write_csv(std::ostream& out, const LatticeSeries& s);

}  // namespace qid
