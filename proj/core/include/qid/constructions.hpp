#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "qid/charfn.hpp"
#include "qid/model.hpp"

namespace qid {

/// Mixing law on (0, inf): atoms (t_i, p_i) plus an optional uniform part.
/// The smallest atom location must be the lower end of the support.
struct MixingDistribution {
  std::vector<Atom> atoms;
  double ac_weight = 0.0;
  std::optional<Uniform> ac;

  double lower_end() const;
  /// Throws InputError unless the invariants hold.
  void validate() const;
};

/// sum_i p_i N(b_i, a_i) as an atomless law.
Distribution normal_mixture(std::span<const double> weights, std::span<const double> means,
                            std::span<const double> variances);

/// int N(0, t) rho(dt); the uniform mixing part is integrated by Gauss-Legendre.
Distribution variance_mixture(const MixingDistribution& rho, std::size_t quadrature_order = 16);

/// Law of X + Y for independent X ~ a, Y ~ b. Normal pairs stay normal,
/// uniform pairs are tabulated exactly from distribution-function differences,
/// anything else by numerical convolution of tabulated densities.
Distribution convolve(const Distribution& a, const Distribution& b);

/// mu_t = mu1(dx/t) * mu2(dx/(1-t)); mu_0 = mu2 and mu_1 = mu1.
Distribution interpolate(const Distribution& mu1, const Distribution& mu2, double t);

struct LevyDistance {
  double distance = 0.0;
  /// Spacing of the x grid the sandwich inequalities are checked on.
  double grid_spacing = 0.0;
};

/// Levy metric: smallest eps with F(x-eps)-eps <= G(x) <= F(x+eps)+eps and the
/// same with F, G swapped, for all grid x. Bisection over eps.
LevyDistance levy_distance(const Distribution& mu, const Distribution& nu, double grid_spacing = 1e-3);

struct SequenceMember {
  std::size_t n = 0;
  Distribution law = Distribution::dirac();
  /// Zero of the member's characteristic function at n z*.
  ZeroCertificate certificate;
};

/// mu * nu(n dx): its transform mu-hat(z) nu-hat(z/n) vanishes at n z* for
/// any zero z* of nu-hat. `scan_bound` limits the zero search on nu when nu
/// has no atom. Throws InputError when nu-hat shows no zero.
SequenceMember nonqid_sequence(const Distribution& mu, const Distribution& nu, std::size_t n,
                               double scan_bound = 64.0);

}  // namespace qid
