#pragma once

// Distributions built from atoms, an optional lattice, and an absolutely
// continuous part; plus the characteristic-function grid they evaluate to.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "qid/numeric.hpp"

namespace qid {

struct Normal {
  double mean = 0.0;
  double variance = 1.0;
};

/// Exponential law with the given rate, supported on [loc, inf).
struct Exponential {
  double rate = 1.0;
  double loc = 0.0;
};

struct Uniform {
  double left = -1.0;
  double right = 1.0;
};

/// Samples on x0 + k*dx, read as the piecewise-linear interpolant and zero
/// outside the grid. Values may be signed when used for Wiener elements.
class Tabulated {
 public:
  Tabulated() = default;
  Tabulated(double x0, double dx, std::vector<double> values);

  double x0() const { return x0_; }
  double dx() const { return dx_; }
  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double x(std::size_t k) const { return x0_ + dx_ * static_cast<double>(k); }
  double x_end() const { return x(values_.size() - 1); }

  double at(double x) const;
  /// Integral of the interpolant up to x.
  double integral_to(double x) const;
  double integral() const { return cumulative_.empty() ? 0.0 : cumulative_.back(); }
  /// Integral of |interpolant| over the grid.
  double abs_integral() const;
  /// Transform of the interpolant at z (kernel exp(+ixz)).
  cplx transform(double z) const;
  std::vector<cplx> transform_grid(double z0, double dz, std::size_t n) const;

 private:
  double x0_ = 0.0;
  double dx_ = 1.0;
  std::vector<double> values_;
  std::vector<double> cumulative_;
};

using Component = std::variant<Normal, Exponential, Uniform, Tabulated>;

struct WeightedComponent {
  double weight = 1.0;
  Component shape;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi - lo; }
};

/// A probability density: a finite convex combination of components.
class Density {
 public:
  Density() = default;
  explicit Density(Component c);
  explicit Density(std::vector<WeightedComponent> parts);

  const std::vector<WeightedComponent>& parts() const { return parts_; }
  bool is_normal_mixture() const;
  bool has_tabulated() const;

  double pdf(double x) const;
  double cdf(double x) const;
  /// Fourier transform with kernel exp(+ixz).
  cplx transform(double z) const;
  /// Transform on z0 + j*dz, j < n.
  std::vector<cplx> transform_grid(double z0, double dz, std::size_t n) const;

  /// Total variation including boundary jumps; |transform(z)| <= tv / |z|.
  double total_variation() const;
  /// Interval outside which the mass is below `tail`.
  Interval essential_support(double tail = 1e-7) const;

  Density shifted(double c) const;
  /// Law of t*X for t > 0.
  Density scaled(double t) const;

  /// Throws InputError on parameter-range or normalisation violations.
  void validate() const;

 private:
  std::vector<WeightedComponent> parts_;
};

struct Atom {
  double x = 0.0;
  double p = 0.0;
};

struct Lattice {
  double r = 0.0;
  double h = 1.0;
};

/// mu = sum_j p_j delta_{x_j} + ac_weight * f. Invariants are checked on
/// construction; masses are never renormalised.
class Distribution {
 public:
  Distribution(std::vector<Atom> atoms, std::optional<Lattice> lattice, double ac_weight,
               std::optional<Density> ac);

  static Distribution dirac(double x = 0.0);
  static Distribution continuous(Density d);
  static Distribution atom_plus(double x0, double p, Density d);

  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::optional<Lattice>& lattice() const { return lattice_; }
  double ac_weight() const { return ac_weight_; }
  const std::optional<Density>& ac() const { return ac_; }
  bool has_ac() const { return ac_.has_value() && ac_weight_ > 0.0; }

  double atom_mass() const;

  cplx charfn(double z) const;
  std::vector<cplx> charfn_grid(double z0, double dz, std::size_t n) const;
  /// Characteristic function of the absolutely continuous part, weight included.
  cplx ac_charfn(double z) const;

  /// Right-continuous distribution function.
  double cdf(double x) const;
  Interval essential_support(double tail = 1e-7) const;

  Distribution shifted(double c) const;
  /// Law of t*X; t = 0 collapses to delta_0.
  Distribution scaled(double t) const;

 private:
  std::vector<Atom> atoms_;
  std::optional<Lattice> lattice_;
  double ac_weight_ = 0.0;
  std::optional<Density> ac_;
};

/// Samples of mu-hat at z_j = -z_max + j * 2 z_max / (n - 1).
struct CharFunctionGrid {
  double z_max = 0.0;
  std::vector<cplx> values;

  std::size_t size() const { return values.size(); }
  double spacing() const { return 2.0 * z_max / static_cast<double>(values.size() - 1); }
  double z(std::size_t j) const { return -z_max + spacing() * static_cast<double>(j); }
  /// Largest |F(-z) - conj F(z)| over the grid.
  double hermitian_defect() const;
  double max_modulus() const;
  double min_modulus() const;
};

struct ZeroCertificate {
  enum class Verdict { no_zeros, zero_found };
  Verdict verdict = Verdict::no_zeros;
  // zero_found
  double z_lo = 0.0;
  double z_hi = 0.0;
  double refined_location = 0.0;
  double refined_modulus = 0.0;
  // no_zeros
  double z_max_used = 0.0;
  double tail_bound_used = 0.0;
  double min_modulus_observed = 0.0;

  bool has_zero() const { return verdict == Verdict::zero_found; }
};

/// Distribution function sampled on a uniform grid; throws InputError when
/// the grid misses more than `max_tail` of the mass on either side.
std::vector<double> cdf_grid(const Distribution& dist, std::span<const double> x_grid,
                             double max_tail = 1e-6);

std::string describe(const Component& c);

}  // namespace qid
