#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qid/model.hpp"

namespace qid {

struct LatticeAtom {
  double location = 0.0;
  double weight = 0.0;
};

/// Characteristic triplet of a quasi-infinitely divisible law with drift.
///
/// The quasi-Levy measure has density
///   density(x) + origin_jump/2 sgn(x) e^{-origin_rate|x|} + origin_kink/2 e^{-origin_rate|x|}
///   + index * sgn(x) e^{-singular_rate|x|} / |x|
/// plus point masses `lattice_atoms`. The two origin terms carry the jump and
/// kink of the density at 0 in closed form so the tabulated part stays smooth.
struct QuasiLevyTriplet {
  double gaussian_variance = 0.0;
  double drift = 0.0;
  int index = 0;
  double singular_rate = 1.0;
  Tabulated density;
  double origin_jump = 0.0;
  double origin_kink = 0.0;
  double origin_rate = 1.0;
  std::vector<LatticeAtom> lattice_atoms;
  /// Atom location the extraction was centred on.
  double location_shift = 0.0;

  /// |nu| is finite exactly when there is no singular term.
  bool finite_variation() const { return index == 0; }

  /// Absolutely continuous part without the singular term.
  double regular_density(double x) const;
  /// Full density including the singular term (infinite at 0 when index != 0).
  double levy_density(double x) const;

  /// Integral of min(1,|x|) d|nu| over the tabulation window plus the atoms.
  double truncated_variation() const;
};

/// exp(-a z^2/2 + i gamma0 z + int (e^{ixz}-1) nu(dx)) at z.
cplx reconstruct_charfn(const QuasiLevyTriplet& tr, double z);
/// Same on z0 + j*dz, j < n.
std::vector<cplx> reconstruct_charfn(const QuasiLevyTriplet& tr, double z0, double dz, std::size_t n);

/// Triplet of the law of tX. The singular and origin shapes keep their form
/// with rates divided by t, so the index is unchanged.
QuasiLevyTriplet scale_triplet(const QuasiLevyTriplet& tr, double t);

}  // namespace qid
