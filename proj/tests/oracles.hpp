#pragma once

// Reference values computed independently of the library (closed forms,
// series, or high-precision root finding) and frozen here.

#include <cmath>
#include <numbers>

namespace oracle {

inline constexpr double pi = std::numbers::pi;

// 0.001 + 0.999 exp(i pi - pi^2/2)
inline constexpr double index_two_charfn_at_pi = -0.00618469147247054;

// TV of the N(0,1) density: 2 * peak = 2 / sqrt(2 pi).
inline constexpr double tv_standard_normal = 0.7978845608028654;

// Roots of 0.1 + 0.9 sin(z)/z on (0, 6).
inline constexpr double sinc_root_first = 3.546650934784294;
inline constexpr double sinc_root_second = 5.610163730849807;
// Minimiser and minimum of sin(z)/z on (pi, 2 pi).
inline constexpr double sinc_argmin = 4.493409457909064;
inline constexpr double sinc_min = -0.2172336282112217;

// 1/(0.7 + 0.3 w) = (10/7) sum (-3/7)^k w^k
inline constexpr double c0 = 10.0 / 7.0;
inline constexpr double c1 = -30.0 / 49.0;
// log(1 + (3/7) w) = sum (-1)^{k+1} (3/7)^k / k w^k
inline double b(int k) { return (k % 2 == 1 ? 1.0 : -1.0) * std::pow(3.0 / 7.0, k) / k; }

// Quasi-Levy density of 0.5 delta_0 + 0.5 Exp(1).
inline double exp_atom_density(double x) { return x > 0.0 ? (std::exp(-x) - std::exp(-2.0 * x)) / x : 0.0; }
inline constexpr double exp_atom_density_at_1 = 0.2325441579348300;

// 0.5 + 0.5 * Phi(0)
inline constexpr double half_atom_half_normal_cdf_at_0 = 0.75;

// Root of 0.1 + 0.9 sin(z)/z by plain bisection on [lo, hi].
inline double sinc_root_by_bisection(double lo, double hi) {
  auto f = [](double z) { return 0.1 + 0.9 * std::sin(z) / z; };
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    ((f(lo) < 0) == (f(mid) < 0) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace oracle
