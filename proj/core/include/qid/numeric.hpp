#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <span>
#include <vector>

namespace qid {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Cascade summation; the result depends only on the input order.
double pairwise_sum(std::span<const double> v);
cplx pairwise_sum(std::span<const cplx> v);

/// Standard normal CDF and density.
double normal_cdf(double x);
double normal_pdf(double x);

/// Golden-section minimisation of f on [lo, hi] down to bracket width tol.
/// Returns the abscissa of the smallest value seen.
double golden_section_min(const std::function<double(double)>& f, double lo, double hi,
                          double tol);

/// Bisection for a sign change of f on [lo, hi].
double bisect_root(const std::function<double(double)>& f, double lo, double hi, double tol);

/// Principal argument of b/a, i.e. the phase increment from a to b.
inline double phase_step(cplx a, cplx b) { return std::arg(b / a); }

bool is_power_of_two(std::size_t n);

/// Gauss-Legendre rule of the given order mapped to [a, b].
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
QuadratureRule gauss_legendre(std::size_t order, double a, double b);

}  // namespace qid
