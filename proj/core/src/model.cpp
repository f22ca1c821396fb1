#include "qid/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "qid/error.hpp"
#include "qid/fft.hpp"

namespace qid {

namespace {

constexpr double kMassTol = 1e-12;
constexpr double kTabulatedMassTol = 1e-9;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Transform of the right half-hat on [0, dx]: dx * (1 + iu - e^{iu}) / u^2, u = z dx.
cplx half_hat(double z, double dx) {
  const double u = z * dx;
  if (std::abs(u) < 1e-2) {
    const double u2 = u * u;
    return dx * cplx(0.5 - u2 / 24.0 + u2 * u2 / 720.0, u / 6.0 - u * u2 / 120.0);
  }
  const cplx e = std::polar(1.0, u);
  return dx * (cplx(1.0, u) - e) / (u * u);
}

double normal_quantile_upper(double tail) {
  // x with 1 - Phi(x) = tail
  return bisect_root([tail](double x) { return normal_cdf(-x) - tail; }, 0.0, 40.0, 1e-12);
}

double component_pdf(const Component& c, double x) {
  return std::visit(
      overloaded{
          [x](const Normal& n) {
            const double s = std::sqrt(n.variance);
            return normal_pdf((x - n.mean) / s) / s;
          },
          [x](const Exponential& e) { return x < e.loc ? 0.0 : e.rate * std::exp(-e.rate * (x - e.loc)); },
          [x](const Uniform& u) { return (x < u.left || x > u.right) ? 0.0 : 1.0 / (u.right - u.left); },
          [x](const Tabulated& t) { return t.at(x); },
      },
      c);
}

double component_cdf(const Component& c, double x) {
  return std::visit(
      overloaded{
          [x](const Normal& n) { return normal_cdf((x - n.mean) / std::sqrt(n.variance)); },
          [x](const Exponential& e) { return x < e.loc ? 0.0 : -std::expm1(-e.rate * (x - e.loc)); },
          [x](const Uniform& u) { return std::clamp((x - u.left) / (u.right - u.left), 0.0, 1.0); },
          [x](const Tabulated& t) { return t.integral_to(x); },
      },
      c);
}

cplx component_transform(const Component& c, double z) {
  return std::visit(
      overloaded{
          [z](const Normal& n) { return std::polar(std::exp(-0.5 * n.variance * z * z), n.mean * z); },
          [z](const Exponential& e) {
            const double l = e.rate;
            return std::polar(1.0, e.loc * z) * cplx(l * l, l * z) / (l * l + z * z);
          },
          [z](const Uniform& u) {
            const double half = 0.5 * (u.right - u.left);
            const double w = half * z;
            const double sinc = std::abs(w) < 1e-8 ? 1.0 - w * w / 6.0 : std::sin(w) / w;
            return std::polar(1.0, 0.5 * (u.left + u.right) * z) * sinc;
          },
          [z](const Tabulated& t) { return t.transform(z); },
      },
      c);
}

double component_tv(const Component& c) {
  return std::visit(
      overloaded{
          [](const Normal& n) { return 2.0 / std::sqrt(kTwoPi * n.variance); },
          [](const Exponential& e) { return 2.0 * e.rate; },
          [](const Uniform& u) { return 2.0 / (u.right - u.left); },
          [](const Tabulated& t) {
            const auto& v = t.values();
            std::vector<double> jumps(v.size() + 1);
            jumps[0] = std::abs(v.front());
            for (std::size_t k = 1; k < v.size(); ++k) jumps[k] = std::abs(v[k] - v[k - 1]);
            jumps[v.size()] = std::abs(v.back());
            return pairwise_sum(jumps);
          },
      },
      c);
}

Interval component_support(const Component& c, double tail) {
  return std::visit(
      overloaded{
          [tail](const Normal& n) {
            const double q = normal_quantile_upper(0.5 * tail) * std::sqrt(n.variance);
            return Interval{n.mean - q, n.mean + q};
          },
          [tail](const Exponential& e) { return Interval{e.loc, e.loc + std::log(1.0 / tail) / e.rate}; },
          [](const Uniform& u) { return Interval{u.left, u.right}; },
          [](const Tabulated& t) { return Interval{t.x0(), t.x_end()}; },
      },
      c);
}

Component component_shifted(const Component& c, double s) {
  return std::visit(
      overloaded{
          [s](const Normal& n) -> Component { return Normal{n.mean + s, n.variance}; },
          [s](const Exponential& e) -> Component { return Exponential{e.rate, e.loc + s}; },
          [s](const Uniform& u) -> Component { return Uniform{u.left + s, u.right + s}; },
          [s](const Tabulated& t) -> Component { return Tabulated(t.x0() + s, t.dx(), t.values()); },
      },
      c);
}

Component component_scaled(const Component& c, double s) {
  return std::visit(
      overloaded{
          [s](const Normal& n) -> Component { return Normal{s * n.mean, s * s * n.variance}; },
          [s](const Exponential& e) -> Component { return Exponential{e.rate / s, s * e.loc}; },
          [s](const Uniform& u) -> Component { return Uniform{s * u.left, s * u.right}; },
          [s](const Tabulated& t) -> Component {
            std::vector<double> v = t.values();
            for (double& y : v) y /= s;
            return Tabulated(s * t.x0(), s * t.dx(), std::move(v));
          },
      },
      c);
}

void validate_component(const Component& c) {
  std::visit(
      overloaded{
          [](const Normal& n) {
            if (!(n.variance > 0.0) || !std::isfinite(n.mean)) throw InputError("normal: variance must be > 0");
          },
          [](const Exponential& e) {
            if (!(e.rate > 0.0) || !std::isfinite(e.loc)) throw InputError("exponential: rate must be > 0");
          },
          [](const Uniform& u) {
            if (!(u.right > u.left)) throw InputError("uniform: right must exceed left");
          },
          [](const Tabulated& t) {
            if (t.size() < 2 || !(t.dx() > 0.0)) throw InputError("tabulated: need >= 2 nodes and dx > 0");
            for (double v : t.values()) {
              if (!(v >= 0.0)) throw InputError("tabulated: negative density value");
            }
            if (std::abs(t.integral() - 1.0) > kTabulatedMassTol) {
              std::ostringstream os;
              os << "tabulated: density integrates to " << t.integral() << ", not 1";
              throw InputError(os.str());
            }
          },
      },
      c);
}

}  // namespace

// ---------------------------------------------------------------- Tabulated

Tabulated::Tabulated(double x0, double dx, std::vector<double> values)
    : x0_(x0), dx_(dx), values_(std::move(values)) {
  cumulative_.resize(values_.size());
  if (values_.empty()) return;
  // Cell integrals accumulated left to right.
  cumulative_[0] = 0.0;
  for (std::size_t k = 1; k < values_.size(); ++k)
    cumulative_[k] = cumulative_[k - 1] + 0.5 * dx_ * (values_[k - 1] + values_[k]);
}

double Tabulated::at(double xq) const {
  if (values_.empty() || xq < x0_ || xq > x_end()) return 0.0;
  const double s = (xq - x0_) / dx_;
  const auto k = std::min(static_cast<std::size_t>(s), values_.size() - 2);
  const double frac = s - static_cast<double>(k);
  return values_[k] + frac * (values_[k + 1] - values_[k]);
}

double Tabulated::integral_to(double xq) const {
  if (values_.empty() || xq <= x0_) return 0.0;
  if (xq >= x_end()) return cumulative_.back();
  const double s = (xq - x0_) / dx_;
  const auto k = std::min(static_cast<std::size_t>(s), values_.size() - 2);
  const double t = xq - x(k);
  const double slope = (values_[k + 1] - values_[k]) / dx_;
  return cumulative_[k] + values_[k] * t + 0.5 * slope * t * t;
}

double Tabulated::abs_integral() const {
  std::vector<double> cells(values_.size() > 0 ? values_.size() - 1 : 0);
  for (std::size_t k = 0; k + 1 < values_.size(); ++k) {
    const double a = values_[k];
    const double b = values_[k + 1];
    if ((a >= 0.0) == (b >= 0.0)) {
      cells[k] = 0.5 * dx_ * (std::abs(a) + std::abs(b));
    } else {
      cells[k] = 0.5 * dx_ * (a * a + b * b) / (std::abs(a) + std::abs(b));
    }
  }
  return pairwise_sum(cells);
}

cplx Tabulated::transform(double z) const {
  if (values_.empty()) return 0.0;
  std::vector<cplx> terms(values_.size());
  for (std::size_t k = 0; k < values_.size(); ++k) terms[k] = values_[k] * std::polar(1.0, x(k) * z);
  const cplx sum = pairwise_sum(terms);
  const cplx a = half_hat(z, dx_);
  return 2.0 * a.real() * sum - terms.front() * std::conj(a) - terms.back() * a;
}

std::vector<cplx> Tabulated::transform_grid(double z0, double dz, std::size_t n) const {
  std::vector<cplx> out(n);
  if (values_.empty() || n == 0) return out;
  const std::size_t m = values_.size();
  std::vector<cplx> a(m);
  for (std::size_t k = 0; k < m; ++k) a[k] = values_[k] * std::polar(1.0, static_cast<double>(k) * dx_ * z0);
  const std::vector<cplx> sums = fft::chirp_z(a, dx_ * dz, n);
  for (std::size_t j = 0; j < n; ++j) {
    const double z = z0 + dz * static_cast<double>(j);
    const cplx h = half_hat(z, dx_);
    const cplx s = sums[j] * std::polar(1.0, x0_ * z);
    out[j] = 2.0 * h.real() * s - values_.front() * std::polar(1.0, x0_ * z) * std::conj(h) -
             values_.back() * std::polar(1.0, x_end() * z) * h;
  }
  return out;
}

// ------------------------------------------------------------------ Density

Density::Density(Component c) : parts_{WeightedComponent{1.0, std::move(c)}} { validate(); }

Density::Density(std::vector<WeightedComponent> parts) : parts_(std::move(parts)) { validate(); }

void Density::validate() const {
  if (parts_.empty()) throw InputError("density: no components");
  std::vector<double> w;
  for (const auto& p : parts_) {
    if (!(p.weight > 0.0)) throw InputError("density: mixture weights must be > 0");
    w.push_back(p.weight);
    validate_component(p.shape);
  }
  if (std::abs(pairwise_sum(w) - 1.0) > kMassTol) throw InputError("density: mixture weights must sum to 1");
}

bool Density::is_normal_mixture() const {
  return std::all_of(parts_.begin(), parts_.end(),
                     [](const auto& p) { return std::holds_alternative<Normal>(p.shape); });
}

bool Density::has_tabulated() const {
  return std::any_of(parts_.begin(), parts_.end(),
                     [](const auto& p) { return std::holds_alternative<Tabulated>(p.shape); });
}

double Density::pdf(double x) const {
  double acc = 0.0;
  for (const auto& p : parts_) acc += p.weight * component_pdf(p.shape, x);
  return acc;
}

double Density::cdf(double x) const {
  double acc = 0.0;
  for (const auto& p : parts_) acc += p.weight * component_cdf(p.shape, x);
  return std::clamp(acc, 0.0, 1.0);
}

cplx Density::transform(double z) const {
  cplx acc = 0.0;
  for (const auto& p : parts_) acc += p.weight * component_transform(p.shape, z);
  return acc;
}

std::vector<cplx> Density::transform_grid(double z0, double dz, std::size_t n) const {
  std::vector<cplx> out(n, cplx{});
  for (const auto& p : parts_) {
    if (const auto* t = std::get_if<Tabulated>(&p.shape)) {
      const auto part = t->transform_grid(z0, dz, n);
      for (std::size_t j = 0; j < n; ++j) out[j] += p.weight * part[j];
    } else {
      for (std::size_t j = 0; j < n; ++j)
        out[j] += p.weight * component_transform(p.shape, z0 + dz * static_cast<double>(j));
    }
  }
  return out;
}

double Density::total_variation() const {
  std::vector<double> tv;
  for (const auto& p : parts_) tv.push_back(p.weight * component_tv(p.shape));
  return pairwise_sum(tv);
}

Interval Density::essential_support(double tail) const {
  Interval out{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const auto& p : parts_) {
    const Interval s = component_support(p.shape, tail);
    out.lo = std::min(out.lo, s.lo);
    out.hi = std::max(out.hi, s.hi);
  }
  return out;
}

Density Density::shifted(double c) const {
  std::vector<WeightedComponent> parts;
  for (const auto& p : parts_) parts.push_back({p.weight, component_shifted(p.shape, c)});
  return Density(std::move(parts));
}

Density Density::scaled(double t) const {
  if (!(t > 0.0)) throw InputError("density: scale must be > 0");
  std::vector<WeightedComponent> parts;
  for (const auto& p : parts_) parts.push_back({p.weight, component_scaled(p.shape, t)});
  return Density(std::move(parts));
}

// ------------------------------------------------------------- Distribution

Distribution::Distribution(std::vector<Atom> atoms, std::optional<Lattice> lattice, double ac_weight,
                           std::optional<Density> ac)
    : atoms_(std::move(atoms)), lattice_(lattice), ac_weight_(ac_weight), ac_(std::move(ac)) {
  std::vector<double> masses;
  for (const Atom& a : atoms_) {
    if (!(a.p > 0.0) || a.p > 1.0 || !std::isfinite(a.x)) throw InputError("atom masses must lie in (0, 1]");
    masses.push_back(a.p);
  }
  if (!(ac_weight_ >= 0.0) || ac_weight_ > 1.0) throw InputError("ac weight must lie in [0, 1]");
  if (ac_weight_ > 0.0 && !ac_) throw InputError("ac weight given without a density");
  if (ac_weight_ == 0.0) ac_.reset();
  masses.push_back(ac_weight_);
  const double total = pairwise_sum(masses);
  if (std::abs(total - 1.0) > kMassTol) {
    std::ostringstream os;
    os.precision(17);
    os << "masses sum to " << total << ", not 1";
    throw InputError(os.str());
  }
  if (lattice_) {
    if (!(lattice_->h > 0.0)) throw InputError("lattice step must be > 0");
    const double tol = 1e-12 * std::max({1.0, std::abs(lattice_->r), lattice_->h});
    for (const Atom& a : atoms_) {
      const double k = (a.x - lattice_->r) / lattice_->h;
      if (std::abs(a.x - (lattice_->r + lattice_->h * std::round(k))) > tol)
        throw InputError("atom off the declared lattice");
    }
  }
  if (ac_) ac_->validate();
}

Distribution Distribution::dirac(double x) { return Distribution({{x, 1.0}}, std::nullopt, 0.0, std::nullopt); }

Distribution Distribution::continuous(Density d) { return Distribution({}, std::nullopt, 1.0, std::move(d)); }

Distribution Distribution::atom_plus(double x0, double p, Density d) {
  return Distribution({{x0, p}}, std::nullopt, 1.0 - p, std::move(d));
}

double Distribution::atom_mass() const {
  std::vector<double> m;
  for (const Atom& a : atoms_) m.push_back(a.p);
  return pairwise_sum(m);
}

cplx Distribution::ac_charfn(double z) const { return has_ac() ? ac_weight_ * ac_->transform(z) : cplx{}; }

cplx Distribution::charfn(double z) const {
  cplx acc = ac_charfn(z);
  for (const Atom& a : atoms_) acc += std::polar(a.p, a.x * z);
  return acc;
}

std::vector<cplx> Distribution::charfn_grid(double z0, double dz, std::size_t n) const {
  std::vector<cplx> out(n, cplx{});
  if (has_ac()) {
    out = ac_->transform_grid(z0, dz, n);
    for (auto& v : out) v *= ac_weight_;
  }
  for (std::size_t j = 0; j < n; ++j) {
    const double z = z0 + dz * static_cast<double>(j);
    for (const Atom& a : atoms_) out[j] += std::polar(a.p, a.x * z);
  }
  return out;
}

double Distribution::cdf(double x) const {
  double acc = has_ac() ? ac_weight_ * ac_->cdf(x) : 0.0;
  for (const Atom& a : atoms_)
    if (a.x <= x) acc += a.p;
  return std::clamp(acc, 0.0, 1.0);
}

Interval Distribution::essential_support(double tail) const {
  Interval out{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const Atom& a : atoms_) {
    out.lo = std::min(out.lo, a.x);
    out.hi = std::max(out.hi, a.x);
  }
  if (has_ac()) {
    const Interval s = ac_->essential_support(tail);
    out.lo = std::min(out.lo, s.lo);
    out.hi = std::max(out.hi, s.hi);
  }
  return out;
}

Distribution Distribution::shifted(double c) const {
  std::vector<Atom> atoms = atoms_;
  for (Atom& a : atoms) a.x += c;
  std::optional<Lattice> lat = lattice_;
  if (lat) lat->r += c;
  std::optional<Density> ac;
  if (has_ac()) ac = ac_->shifted(c);
  return Distribution(std::move(atoms), lat, ac_weight_, std::move(ac));
}

Distribution Distribution::scaled(double t) const {
  if (t < 0.0) throw InputError("scale must be >= 0");
  if (t == 0.0) return dirac(0.0);
  std::vector<Atom> atoms = atoms_;
  for (Atom& a : atoms) a.x *= t;
  std::optional<Lattice> lat = lattice_;
  if (lat) lat = Lattice{t * lat->r, t * lat->h};
  std::optional<Density> ac;
  if (has_ac()) ac = ac_->scaled(t);
  return Distribution(std::move(atoms), lat, ac_weight_, std::move(ac));
}

// --------------------------------------------------------- CharFunctionGrid

double CharFunctionGrid::hermitian_defect() const {
  double worst = 0.0;
  const std::size_t n = values.size();
  for (std::size_t j = 0; j < n; ++j) worst = std::max(worst, std::abs(values[n - 1 - j] - std::conj(values[j])));
  return worst;
}

double CharFunctionGrid::max_modulus() const {
  double m = 0.0;
  for (const auto& v : values) m = std::max(m, std::abs(v));
  return m;
}

double CharFunctionGrid::min_modulus() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& v : values) m = std::min(m, std::abs(v));
  return m;
}

// ------------------------------------------------------------------ helpers

std::vector<double> cdf_grid(const Distribution& dist, std::span<const double> x_grid, double max_tail) {
  if (x_grid.empty()) throw InputError("cdf_grid: empty grid");
  for (std::size_t k = 1; k < x_grid.size(); ++k) {
    if (!(x_grid[k] > x_grid[k - 1])) throw InputError("cdf_grid: grid must be strictly increasing");
  }
  std::vector<double> out(x_grid.size());
  for (std::size_t k = 0; k < x_grid.size(); ++k) out[k] = dist.cdf(x_grid[k]);
  // Left tail is the mass strictly below the first node.
  const double left_tail = dist.cdf(std::nextafter(x_grid.front(), -std::numeric_limits<double>::infinity()));
  if (left_tail > max_tail || 1.0 - out.back() > max_tail)
    throw InputError("cdf_grid: grid does not cover the essential support");
  for (std::size_t k = 1; k < out.size(); ++k) out[k] = std::max(out[k], out[k - 1]);
  return out;
}

std::string describe(const Component& c) {
  std::ostringstream os;
  std::visit(overloaded{
                 [&os](const Normal& n) { os << "normal(" << n.mean << ", " << n.variance << ")"; },
                 [&os](const Exponential& e) { os << "exponential(" << e.rate << ", loc " << e.loc << ")"; },
                 [&os](const Uniform& u) { os << "uniform(" << u.left << ", " << u.right << ")"; },
                 [&os](const Tabulated& t) {
                   os << "tabulated(" << t.size() << " nodes on [" << t.x0() << ", " << t.x_end() << "])";
                 },
             },
             c);
  return os.str();
}

}  // namespace qid
