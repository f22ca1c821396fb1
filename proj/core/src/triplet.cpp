#include "qid/triplet.hpp"

#include <cmath>

#include "qid/error.hpp"

namespace qid {

namespace {

double sgn(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

// Exponent contributions that have a closed form.
cplx analytic_exponent(const QuasiLevyTriplet& tr, double z) {
  const double lo = tr.origin_rate;
  const double d = lo * lo + z * z;
  cplx e(-0.5 * tr.gaussian_variance * z * z, tr.drift * z);
  e += cplx(tr.origin_kink * (lo / d - 1.0 / lo), tr.origin_jump * z / d);
  if (tr.index != 0) e += cplx(0.0, 2.0 * tr.index * std::atan(z / tr.singular_rate));
  for (const auto& b : tr.lattice_atoms) e += b.weight * (std::polar(1.0, b.location * z) - 1.0);
  return e;
}

}  // namespace

double QuasiLevyTriplet::regular_density(double x) const {
  const double e = std::exp(-origin_rate * std::abs(x));
  return density.at(x) + 0.5 * origin_jump * sgn(x) * e + 0.5 * origin_kink * e;
}

double QuasiLevyTriplet::levy_density(double x) const {
  double v = regular_density(x);
  if (index != 0) v += index * sgn(x) * std::exp(-singular_rate * std::abs(x)) / std::abs(x);
  return v;
}

double QuasiLevyTriplet::truncated_variation() const {
  std::vector<double> parts;
  if (density.size() >= 2) {
    std::vector<double> cells(density.size() - 1);
    auto w = [this](double x) { return std::min(1.0, std::abs(x)) * std::abs(regular_density(x)); };
    for (std::size_t k = 0; k + 1 < density.size(); ++k)
      cells[k] = 0.5 * density.dx() * (w(density.x(k)) + w(density.x(k + 1)));
    parts.push_back(pairwise_sum(cells));
  }
  if (index != 0) {
    // 2|m| [ int_0^1 e^{-rx} dx + int_1^inf e^{-rx}/x dx ]
    const double r = singular_rate;
    parts.push_back(2.0 * std::abs(index) * (-std::expm1(-r) / r - std::expint(-r)));
  }
  for (const auto& b : lattice_atoms) parts.push_back(std::min(1.0, std::abs(b.location)) * std::abs(b.weight));
  return pairwise_sum(parts);
}

cplx reconstruct_charfn(const QuasiLevyTriplet& tr, double z) {
  cplx e = analytic_exponent(tr, z);
  if (tr.density.size() >= 2) e += tr.density.transform(z) - tr.density.integral();
  return std::exp(e);
}

std::vector<cplx> reconstruct_charfn(const QuasiLevyTriplet& tr, double z0, double dz, std::size_t n) {
  std::vector<cplx> out(n);
  std::vector<cplx> tab;
  double mass = 0.0;
  if (tr.density.size() >= 2) {
    tab = tr.density.transform_grid(z0, dz, n);
    mass = tr.density.integral();
  }
  for (std::size_t j = 0; j < n; ++j) {
    const double z = z0 + dz * static_cast<double>(j);
    cplx e = analytic_exponent(tr, z);
    if (!tab.empty()) e += tab[j] - mass;
    out[j] = std::exp(e);
  }
  return out;
}

QuasiLevyTriplet scale_triplet(const QuasiLevyTriplet& tr, double t) {
  if (!(t > 0.0)) throw InputError("scale_triplet: t must be > 0");
  QuasiLevyTriplet out = tr;
  out.gaussian_variance = tr.gaussian_variance * t * t;
  out.drift = tr.drift * t;
  out.location_shift = tr.location_shift * t;
  if (tr.density.size() >= 2) {
    std::vector<double> v = tr.density.values();
    for (double& y : v) y /= t;
    out.density = Tabulated(t * tr.density.x0(), t * tr.density.dx(), std::move(v));
  }
  out.origin_jump = tr.origin_jump / t;
  out.origin_kink = tr.origin_kink / t;
  out.origin_rate = tr.origin_rate / t;
  out.singular_rate = tr.singular_rate / t;
  for (auto& b : out.lattice_atoms) b.location *= t;
  return out;
}

}  // namespace qid
