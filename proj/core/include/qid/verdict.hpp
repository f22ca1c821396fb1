#pragma once

#include <optional>
#include <string>

#include "qid/charfn.hpp"
#include "qid/krein.hpp"
#include "qid/lattice.hpp"
#include "qid/model.hpp"
#include "qid/triplet.hpp"

namespace qid {

struct AnalysisOptions {
  KreinOptions krein;
  ScanConfig scan;
};

enum class Route { krein, lattice, normal_mixture };
std::string to_string(Route r);

struct LatticeReport {
  /// Lattice part renormalised to a probability.
  LatticeSeries series;
  double mass = 0.0;
  InverseSeries inverse;
  LatticeTriplet triplet;
  double identity_error = 0.0;
};

struct QidReport {
  Route route = Route::krein;
  QuasiLevyTriplet triplet;
  /// Krein extraction on the single-atom factor (the law itself, the
  /// lattice companion, or the normal-mixture cofactor).
  KreinReport krein;
  std::optional<LatticeReport> lattice;
  /// sup |reconstructed - mu-hat| over the band of the Krein grid.
  double recon_error = 0.0;
  /// Largest imaginary part among the lattice coefficients b_k.
  double max_imag_b = 0.0;
};

struct QidVerdict {
  bool qid = false;
  ZeroCertificate certificate;
  std::optional<QidReport> report;
};

/// Decides quasi-infinite divisibility and, for QID laws, extracts the triplet.
/// Single atom: Krein route. Several atoms: lattice decomposition. No atom:
/// only normal mixtures are accepted, by factoring out the Gaussian of
/// smallest variance.
QidVerdict qid_verdict(const Distribution& dist, const AnalysisOptions& opt = {});

/// Lattice route; the lattice is inferred when not declared.
QidVerdict mixed_qid_verdict(const Distribution& dist, const AnalysisOptions& opt = {});

/// Normal-mixture factorisation mu = N(b1, a1) * cofactor.
struct NormalFactorisation {
  double mean = 0.0;
  double variance = 0.0;
  Distribution cofactor;
};
NormalFactorisation factor_normal_mixture(const Distribution& dist);

/// sup |reconstruct(tr) - mu-hat| on the symmetric half-shifted grid of n points over [-z_max, z_max].
double reconstruction_error(const QuasiLevyTriplet& tr, const Distribution& dist, double z_max, std::size_t n);

}  // namespace qid
