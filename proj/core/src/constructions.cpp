#include "qid/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "qid/error.hpp"
#include "qid/fft.hpp"

namespace qid {

namespace {

constexpr double kConvStep = 1e-3;
constexpr double kConvTail = 1e-12;
constexpr std::size_t kMaxNodes = std::size_t{1} << 21;

// Length scale used to pick the convolution step.
double scale_of(const Component& c) {
  if (const auto* n = std::get_if<Normal>(&c)) return std::sqrt(n->variance);
  if (const auto* e = std::get_if<Exponential>(&c)) return 1.0 / e->rate;
  if (const auto* u = std::get_if<Uniform>(&c)) return u->right - u->left;
  return std::get<Tabulated>(c).dx() * 200.0;
}

Tabulated normalised(double x0, double dx, std::vector<double> v) {
  for (double& y : v) y = std::max(y, 0.0);
  Tabulated raw(x0, dx, v);
  const double mass = raw.integral();
  if (!(mass > 0.0)) throw NumericalError("convolve: tabulated result carries no mass");
  for (double& y : v) y /= mass;
  return Tabulated(x0, dx, std::move(v));
}

std::size_t node_count(double width, double& dx) {
  auto n = static_cast<std::size_t>(std::ceil(width / dx)) + 1;
  if (n > kMaxNodes) {
    n = kMaxNodes;
    dx = width / static_cast<double>(n - 1);
  }
  return n;
}

Component convolve_components(const Component& a, const Component& b) {
  if (const auto* na = std::get_if<Normal>(&a)) {
    if (const auto* nb = std::get_if<Normal>(&b)) return Normal{na->mean + nb->mean, na->variance + nb->variance};
  }
  double dx = std::min(kConvStep, std::min(scale_of(a), scale_of(b)) / 200.0);
  const Density da(a);
  const Density db(b);
  const Interval sa = da.essential_support(kConvTail);
  const Interval sb = db.essential_support(kConvTail);

  const auto* ua = std::get_if<Uniform>(&a);
  const auto* ub = std::get_if<Uniform>(&b);
  if (ua || ub) {
    // Density of U(l, r) + X is (F_X(x - l) - F_X(x - r)) / (r - l).
    const Uniform u = ua ? *ua : *ub;
    const Density& other = ua ? db : da;
    const Interval so = ua ? sb : sa;
    const double lo = u.left + so.lo;
    const double width = (u.right + so.hi) - lo;
    const std::size_t n = node_count(width, dx);
    std::vector<double> v(n);
    for (std::size_t k = 0; k < n; ++k) {
      const double x = lo + dx * static_cast<double>(k);
      v[k] = (other.cdf(x - u.left) - other.cdf(x - u.right)) / (u.right - u.left);
    }
    return normalised(lo, dx, std::move(v));
  }

  // Trapezoid convolution of the two densities sampled on a common step.
  const std::size_t na = node_count(sa.width(), dx);
  const std::size_t nb = node_count(sb.width(), dx);
  const std::size_t len = fft::next_power_of_two(na + nb);
  std::vector<cplx> fa(len), fb(len);
  for (std::size_t k = 0; k < na; ++k) fa[k] = da.pdf(sa.lo + dx * static_cast<double>(k));
  for (std::size_t k = 0; k < nb; ++k) fb[k] = db.pdf(sb.lo + dx * static_cast<double>(k));
  fft::transform(fa, -1);
  fft::transform(fb, -1);
  for (std::size_t k = 0; k < len; ++k) fa[k] *= fb[k];
  fft::transform(fa, +1);
  std::vector<double> v(na + nb - 1);
  // Half weights at both ends of each integration range keep the rule second
  // order when the densities jump at their support ends.
  const double f0 = da.pdf(sa.lo);
  const double g0 = db.pdf(sb.lo);
  for (std::size_t k = 0; k < v.size(); ++k) {
    const double fk = k < na ? da.pdf(sa.lo + dx * static_cast<double>(k)) : 0.0;
    const double gk = k < nb ? db.pdf(sb.lo + dx * static_cast<double>(k)) : 0.0;
    v[k] = (fa[k].real() / static_cast<double>(len) - 0.5 * (f0 * gk + fk * g0)) * dx;
  }
  return normalised(sa.lo + sb.lo, dx, std::move(v));
}

Component shifted_component(const Component& c, double s) { return Density(c).shifted(s).parts().front().shape; }

}  // namespace

double MixingDistribution::lower_end() const {
  double t = std::numeric_limits<double>::infinity();
  for (const Atom& a : atoms) t = std::min(t, a.x);
  return t;
}

void MixingDistribution::validate() const {
  if (atoms.empty()) throw InputError("mixing law: needs an atom at its lower end");
  std::vector<double> m;
  for (const Atom& a : atoms) {
    if (!(a.x > 0.0)) throw InputError("mixing law: atom locations must be > 0");
    if (!(a.p > 0.0)) throw InputError("mixing law: atom masses must be > 0");
    m.push_back(a.p);
  }
  if (ac_weight < 0.0 || (ac_weight > 0.0 && !ac)) throw InputError("mixing law: invalid ac part");
  if (ac_weight > 0.0) {
    if (!(ac->right > ac->left)) throw InputError("mixing law: uniform part needs right > left");
    if (ac->left < lower_end()) throw InputError("mixing law: ac part extends below the lowest atom");
  }
  m.push_back(ac_weight);
  if (std::abs(pairwise_sum(m) - 1.0) > 1e-12) throw InputError("mixing law: masses must sum to 1");
}

Distribution normal_mixture(std::span<const double> weights, std::span<const double> means,
                            std::span<const double> variances) {
  if (weights.empty() || weights.size() != means.size() || weights.size() != variances.size())
    throw InputError("normal_mixture: weights, means and variances must have equal nonzero length");
  std::vector<WeightedComponent> parts;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (!(weights[i] > 0.0)) throw InputError("normal_mixture: degenerate weight");
    parts.push_back({weights[i], Normal{means[i], variances[i]}});
  }
  return Distribution::continuous(Density(std::move(parts)));
}

Distribution variance_mixture(const MixingDistribution& rho, std::size_t quadrature_order) {
  rho.validate();
  std::vector<WeightedComponent> parts;
  for (const Atom& a : rho.atoms) parts.push_back({a.p, Normal{0.0, a.x}});
  if (rho.ac_weight > 0.0) {
    const QuadratureRule q = gauss_legendre(quadrature_order, rho.ac->left, rho.ac->right);
    const double density = rho.ac_weight / (rho.ac->right - rho.ac->left);
    for (std::size_t i = 0; i < q.nodes.size(); ++i) parts.push_back({density * q.weights[i], Normal{0.0, q.nodes[i]}});
  }
  double total = 0.0;
  for (const auto& p : parts) total += p.weight;
  for (auto& p : parts) p.weight /= total;
  return Distribution::continuous(Density(std::move(parts)));
}

Distribution convolve(const Distribution& a, const Distribution& b) {
  std::vector<Atom> atoms;
  for (const Atom& x : a.atoms()) {
    for (const Atom& y : b.atoms()) {
      const double at = x.x + y.x;
      auto it = std::find_if(atoms.begin(), atoms.end(), [at](const Atom& e) {
        return std::abs(e.x - at) <= 1e-12 * std::max(1.0, std::abs(at));
      });
      if (it == atoms.end()) {
        atoms.push_back({at, x.p * y.p});
      } else {
        it->p += x.p * y.p;
      }
    }
  }
  std::vector<WeightedComponent> parts;
  if (b.has_ac()) {
    for (const Atom& x : a.atoms())
      for (const auto& p : b.ac()->parts()) parts.push_back({x.p * b.ac_weight() * p.weight, shifted_component(p.shape, x.x)});
  }
  if (a.has_ac()) {
    for (const Atom& y : b.atoms())
      for (const auto& p : a.ac()->parts()) parts.push_back({y.p * a.ac_weight() * p.weight, shifted_component(p.shape, y.x)});
  }
  if (a.has_ac() && b.has_ac()) {
    for (const auto& p : a.ac()->parts())
      for (const auto& q : b.ac()->parts())
        parts.push_back({a.ac_weight() * b.ac_weight() * p.weight * q.weight, convolve_components(p.shape, q.shape)});
  }
  std::optional<Lattice> lat;
  if (a.lattice() && b.lattice() && std::abs(a.lattice()->h - b.lattice()->h) <= 1e-12 * a.lattice()->h)
    lat = Lattice{a.lattice()->r + b.lattice()->r, a.lattice()->h};
  if (parts.empty()) return Distribution(std::move(atoms), lat, 0.0, std::nullopt);
  std::vector<double> w;
  for (const auto& p : parts) w.push_back(p.weight);
  const double ac_weight = pairwise_sum(w);
  for (auto& p : parts) p.weight /= ac_weight;
  return Distribution(std::move(atoms), lat, ac_weight, Density(std::move(parts)));
}

Distribution interpolate(const Distribution& mu1, const Distribution& mu2, double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw InputError("interpolate: t must lie in [0, 1]");
  if (t == 0.0) return mu2;
  if (t == 1.0) return mu1;
  return convolve(mu1.scaled(t), mu2.scaled(1.0 - t));
}

LevyDistance levy_distance(const Distribution& mu, const Distribution& nu, double grid_spacing) {
  if (!(grid_spacing > 0.0)) throw InputError("levy_distance: grid spacing must be > 0");
  const Interval a = mu.essential_support(1e-9);
  const Interval b = nu.essential_support(1e-9);
  const double lo = std::min(a.lo, b.lo) - 1.0;
  const double hi = std::max(a.hi, b.hi) + 1.0;
  double dx = grid_spacing;
  const std::size_t n = node_count(hi - lo, dx);
  std::vector<double> x(n);
  for (std::size_t k = 0; k < n; ++k) x[k] = lo + dx * static_cast<double>(k);
  const auto f = cdf_grid(mu, x);
  const auto g = cdf_grid(nu, x);

  auto holds = [&](double eps) {
    for (std::size_t k = 0; k < n; ++k) {
      if (mu.cdf(x[k] - eps) - eps > g[k] || g[k] > mu.cdf(x[k] + eps) + eps) return false;
      if (nu.cdf(x[k] - eps) - eps > f[k] || f[k] > nu.cdf(x[k] + eps) + eps) return false;
    }
    return true;
  };
  double left = 0.0;
  double right = 1.0;
  if (holds(0.0)) right = 0.0;
  while (right - left > 1e-12) {
    const double mid = 0.5 * (left + right);
    (holds(mid) ? right : left) = mid;
  }
  return {right, dx};
}

SequenceMember nonqid_sequence(const Distribution& mu, const Distribution& nu, std::size_t n, double scan_bound) {
  if (n == 0) throw InputError("nonqid_sequence: n must be >= 1");
  ScanConfig cfg;
  if (nu.atoms().empty()) cfg.z_scan_max = scan_bound;
  const ZeroCertificate base = find_zeros(nu, cfg);
  if (!base.has_zero()) throw InputError("nonqid_sequence: the perturbing law shows no zero of its transform");
  const double s = static_cast<double>(n);
  SequenceMember out;
  out.n = n;
  out.law = convolve(mu, nu.scaled(1.0 / s));
  ZeroCertificate& c = out.certificate;
  c.verdict = ZeroCertificate::Verdict::zero_found;
  c.z_lo = s * base.z_lo;
  c.z_hi = s * base.z_hi;
  c.refined_location = s * base.refined_location;
  c.refined_modulus = std::abs(mu.charfn(c.refined_location)) * base.refined_modulus;
  c.z_max_used = s * base.z_max_used;
  c.min_modulus_observed = c.refined_modulus;
  return out;
}

}  // namespace qid
