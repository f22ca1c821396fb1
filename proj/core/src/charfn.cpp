#include "qid/charfn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "qid/error.hpp"

namespace qid {

namespace {

constexpr std::size_t kChunk = std::size_t{1} << 17;
constexpr std::size_t kPeriodGrid = std::size_t{1} << 12;

double lattice_floor(const Distribution& dist) {
  const auto& atoms = dist.atoms();
  if (atoms.size() <= 1) return 1.0;
  const auto lat = infer_lattice(dist);
  if (!lat) throw InputError("several atoms but no lattice: outside the supported class");
  const double mass = dist.atom_mass();
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < kPeriodGrid; ++j) {
    const double w = kTwoPi * static_cast<double>(j) / static_cast<double>(kPeriodGrid);
    cplx acc{};
    for (const Atom& a : atoms) {
      const double k = std::round((a.x - lat->r) / lat->h);
      acc += std::polar(a.p / mass, k * w);
    }
    worst = std::min(worst, std::abs(acc));
  }
  return worst;
}

}  // namespace

std::optional<Lattice> infer_lattice(const Distribution& dist) {
  if (dist.lattice()) return dist.lattice();
  const auto& atoms = dist.atoms();
  if (atoms.empty()) return std::nullopt;
  if (atoms.size() == 1) return Lattice{atoms.front().x, 1.0};
  std::vector<double> xs;
  for (const Atom& a : atoms) xs.push_back(a.x);
  std::sort(xs.begin(), xs.end());
  double min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < xs.size(); ++k) min_gap = std::min(min_gap, xs[k] - xs[k - 1]);
  if (!(min_gap > 0.0)) return std::nullopt;
  const double tol = 1e-9 * std::max(1.0, xs.back() - xs.front());
  for (int div = 1; div <= 64; ++div) {
    const double h = min_gap / div;
    bool ok = true;
    for (double x : xs) {
      const double k = (x - xs.front()) / h;
      if (std::abs(x - xs.front() - std::round(k) * h) > tol) {
        ok = false;
        break;
      }
    }
    if (ok) return Lattice{xs.front(), h};
  }
  return std::nullopt;
}

CharFunctionGrid charfn_eval(const Distribution& dist, double z_max, std::size_t n_points) {
  if (!(z_max > 0.0)) throw InputError("charfn_eval: z_max must be > 0");
  if (n_points < 1024 || !is_power_of_two(n_points))
    throw InputError("charfn_eval: n_points must be a power of two >= 1024");
  const double err = aliasing_estimate(dist, z_max);
  if (err > 1e-6) {
    std::ostringstream os;
    os << "charfn_eval: tabulated density too coarse (estimated aliasing " << err << " at z_max " << z_max << ")";
    throw InputError(os.str());
  }
  CharFunctionGrid grid;
  grid.z_max = z_max;
  grid.values = dist.charfn_grid(-z_max, 2.0 * z_max / static_cast<double>(n_points - 1), n_points);
  return grid;
}

double aliasing_estimate(const Distribution& dist, double z_max) {
  if (!dist.has_ac()) return 0.0;
  double total = 0.0;
  for (const auto& part : dist.ac()->parts()) {
    const auto* t = std::get_if<Tabulated>(&part.shape);
    if (!t) continue;
    if (z_max * t->dx() > kPi) return std::numeric_limits<double>::infinity();
    std::vector<double> alt(t->size());
    for (std::size_t k = 0; k < t->size(); ++k) alt[k] = (k % 2 == 0 ? 1.0 : -1.0) * t->values()[k];
    total += part.weight * t->dx() * std::abs(pairwise_sum(alt));
  }
  return dist.ac_weight() * total;
}

double riemann_lebesgue_bound(const Density& f, double z) {
  if (z == 0.0) throw InputError("riemann_lebesgue_bound: z must be nonzero");
  return f.total_variation() / std::abs(z);
}

TailCutoff tail_cutoff(const Distribution& dist) {
  const double p_tot = dist.atom_mass();
  if (!(p_tot > 0.0)) throw InputError("tail_cutoff: no atom, the scan range must be user-bounded");
  TailCutoff out;
  out.lattice_floor = lattice_floor(dist);
  if (out.lattice_floor < 1e-10)
    throw PeriodZeroError("tail_cutoff: lattice characteristic function vanishes on its period", 0.0,
                          out.lattice_floor);
  if (!dist.has_ac()) return out;
  const double constant = dist.ac_weight() * dist.ac()->total_variation();
  out.bound = TailBound{constant / (p_tot * out.lattice_floor), constant};
  out.scan_limit = out.bound.z_threshold;
  if (!dist.ac()->has_tabulated() && out.scan_limit > 0.0) {
    for (int k = 1; k <= 10; ++k) {
      const double z = out.scan_limit * (1.0 + 0.5 * k);
      if (std::abs(dist.ac_charfn(z)) > constant / z * (1.0 + 1e-12))
        throw NumericalError("tail_cutoff: total-variation bound violated by the closed form");
    }
  }
  return out;
}

ZeroCertificate find_zeros(const std::function<cplx(double)>& eval,
                           const std::function<std::vector<cplx>(double, double, std::size_t)>& eval_grid,
                           double z_end, double spacing, double lipschitz, double refine_tol) {
  const auto n = static_cast<std::size_t>(std::ceil(z_end / spacing)) + 1;
  const double h = z_end / static_cast<double>(n - 1);
  std::vector<double> modulus(n);
  for (std::size_t start = 0; start < n; start += kChunk) {
    const std::size_t len = std::min(kChunk, n - start);
    const auto vals = eval_grid(h * static_cast<double>(start), h, len);
    for (std::size_t j = 0; j < len; ++j) modulus[start + j] = std::abs(vals[j]);
  }

  ZeroCertificate cert;
  cert.z_max_used = z_end;
  cert.min_modulus_observed = *std::min_element(modulus.begin(), modulus.end());
  // Between nodes |F| can dip by at most lipschitz*h below the sampled values.
  const double dip_floor = lipschitz * h + kIndeterminateCeiling;
  auto sq = [&eval](double z) { return std::norm(eval(z)); };

  std::optional<IndeterminateError> pending;
  for (std::size_t j = 0; j < n; ++j) {
    const bool left_ok = j == 0 || modulus[j] <= modulus[j - 1];
    const bool right_ok = j + 1 == n || modulus[j] <= modulus[j + 1];
    const bool strict = (j > 0 && modulus[j] < modulus[j - 1]) || (j + 1 < n && modulus[j] < modulus[j + 1]);
    if (!(left_ok && right_ok && strict) || modulus[j] >= dip_floor) continue;
    const double lo = h * static_cast<double>(j == 0 ? 0 : j - 1);
    const double hi = h * static_cast<double>(std::min(j + 1, n - 1));
    const double z_star = golden_section_min(sq, lo, hi, refine_tol);
    const double m = std::min(std::abs(eval(z_star)), modulus[j]);
    const double at = m == modulus[j] ? h * static_cast<double>(j) : z_star;
    cert.min_modulus_observed = std::min(cert.min_modulus_observed, m);
    if (m < kZeroThreshold) {
      cert.verdict = ZeroCertificate::Verdict::zero_found;
      cert.z_lo = lo;
      cert.z_hi = hi;
      cert.refined_location = at;
      cert.refined_modulus = m;
      return cert;
    }
    if (m <= kIndeterminateCeiling && !pending) {
      std::ostringstream os;
      os << "find_zeros: indeterminate dip |F| = " << m << " at z = " << at;
      pending.emplace(os.str(), at, m);
    }
  }
  if (pending) throw *pending;
  return cert;
}

ZeroCertificate find_zeros(const Distribution& dist, const ScanConfig& config) {
  double z_end = config.z_scan_min;
  double tail = 0.0;
  if (config.z_scan_max) {
    z_end = *config.z_scan_max;
  } else {
    const TailCutoff cut = tail_cutoff(dist);
    tail = cut.scan_limit;
    z_end = std::max(cut.scan_limit, config.z_scan_min);
  }
  const Interval support = dist.essential_support();
  const double spread = std::max(1.0, support.width());
  const double spacing = kPi / (64.0 * spread * config.resolution);
  // Centering at the middle of the support bounds |d|F|/dz| by the half-width plus tail slack.
  const double lipschitz = 0.5 * spread + 1.0;
  ZeroCertificate cert = find_zeros([&dist](double z) { return dist.charfn(z); },
                                    [&dist](double z0, double dz, std::size_t n) { return dist.charfn_grid(z0, dz, n); },
                                    z_end, spacing, lipschitz, config.refine_tol);
  cert.tail_bound_used = tail;
  return cert;
}

}  // namespace qid
