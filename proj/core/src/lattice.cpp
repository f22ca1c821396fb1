#include "qid/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <sstream>

#include "qid/charfn.hpp"
#include "qid/error.hpp"
#include "qid/fft.hpp"
#include "qid/report.hpp"

namespace qid {

namespace {

constexpr double kPeriodZero = 1e-10;
constexpr double kResidualTarget = 1e-8;
constexpr int kMaxDoublings = 2;

std::size_t wrap(long long k, std::size_t n) {
  const auto nn = static_cast<long long>(n);
  return static_cast<std::size_t>(((k % nn) + nn) % nn);
}

// P(w_j) = sum_k a_k e^{ikw_j}, w_j = 2 pi j / n.
std::vector<cplx> period_samples(const LatticeSeries& s, std::size_t n) {
  if (s.coef.size() > n) throw InputError("lattice: series longer than the FFT size");
  std::vector<cplx> buf(n, cplx{});
  for (std::size_t i = 0; i < s.coef.size(); ++i) buf[wrap(s.k_min + static_cast<long long>(i), n)] += s.coef[i];
  fft::transform(buf, +1);
  return buf;
}

void check_period(const std::vector<cplx>& p, double h) {
  std::size_t worst = 0;
  for (std::size_t j = 1; j < p.size(); ++j)
    if (std::abs(p[j]) < std::abs(p[worst])) worst = j;
  if (std::abs(p[worst]) < kPeriodZero) {
    const double w = kTwoPi * static_cast<double>(worst) / static_cast<double>(p.size());
    std::ostringstream os;
    os << "lattice: characteristic function vanishes on its period near z = " << w / h;
    throw PeriodZeroError(os.str(), w / h, std::abs(p[worst]));
  }
}

// Fourier coefficients (1/n) sum_j v_j e^{-2 pi i jk/n} for k in [-n/2, n/2), truncated at tol * l1.
LatticeSeries coefficients(std::vector<cplx> v, double r, double h, double tol, bool drop_zero) {
  const std::size_t n = v.size();
  fft::transform(v, -1);
  const auto half = static_cast<long long>(n / 2);
  std::vector<double> mags;
  for (const auto& c : v) mags.push_back(std::abs(c) / static_cast<double>(n));
  const double l1 = pairwise_sum(mags);
  long long lo = half, hi = -half - 1;
  for (long long k = -half; k < half; ++k) {
    if (drop_zero && k == 0) continue;
    if (mags[wrap(k, n)] >= tol * l1) {
      lo = std::min(lo, k);
      hi = std::max(hi, k);
    }
  }
  LatticeSeries out{r, h, 0, {}};
  if (hi < lo) return out;
  out.k_min = lo;
  for (long long k = lo; k <= hi; ++k) {
    const std::size_t i = wrap(k, n);
    const bool keep = mags[i] >= tol * l1 && !(drop_zero && k == 0);
    out.coef.push_back(keep ? v[i] / static_cast<double>(n) : cplx{});
  }
  return out;
}

double convolution_residual(const LatticeSeries& p, const LatticeSeries& c) {
  std::map<long long, cplx> acc;
  for (std::size_t i = 0; i < p.coef.size(); ++i)
    for (std::size_t j = 0; j < c.coef.size(); ++j)
      acc[p.k_min + static_cast<long long>(i) + c.k_min + static_cast<long long>(j)] += p.coef[i] * c.coef[j];
  std::vector<double> err;
  for (auto& [k, v] : acc) err.push_back(std::abs(k == 0 ? v - 1.0 : v));
  if (!acc.contains(0)) err.push_back(1.0);
  return pairwise_sum(err);
}

}  // namespace

cplx LatticeSeries::at(long long k) const {
  if (k < k_min || k > k_max()) return {};
  return coef[static_cast<std::size_t>(k - k_min)];
}

double LatticeSeries::l1_norm() const {
  std::vector<double> m;
  for (const auto& c : coef) m.push_back(std::abs(c));
  return pairwise_sum(m);
}

cplx LatticeSeries::eval(double z) const {
  std::vector<cplx> t(coef.size());
  for (std::size_t i = 0; i < coef.size(); ++i)
    t[i] = coef[i] * std::polar(1.0, (r + h * static_cast<double>(k_min + static_cast<long long>(i))) * z);
  return pairwise_sum(t);
}

cplx LatticeSeries::eval_normalised(double w) const {
  std::vector<cplx> t(coef.size());
  for (std::size_t i = 0; i < coef.size(); ++i)
    t[i] = coef[i] * std::polar(1.0, static_cast<double>(k_min + static_cast<long long>(i)) * w);
  return pairwise_sum(t);
}

LatticeSeries lattice_series(const Distribution& dist, const Lattice& lat) {
  if (dist.atoms().empty()) throw InputError("lattice: no atoms");
  std::map<long long, double> mass;
  for (const Atom& a : dist.atoms()) mass[std::llround((a.x - lat.r) / lat.h)] += a.p;
  LatticeSeries s{lat.r, lat.h, mass.begin()->first, {}};
  for (long long k = s.k_min; k <= mass.rbegin()->first; ++k) {
    const auto it = mass.find(k);
    s.coef.emplace_back(it == mass.end() ? 0.0 : it->second, 0.0);
  }
  return s;
}

std::vector<cplx> lattice_charfn(const LatticeSeries& s, std::span<const double> z) {
  std::vector<cplx> out(z.size());
  for (std::size_t j = 0; j < z.size(); ++j) out[j] = s.eval(z[j]);
  return out;
}

InverseSeries wiener_invert(const LatticeSeries& s, std::size_t n_fft, double tol) {
  if (n_fft < 4096 || !is_power_of_two(n_fft)) throw InputError("wiener_invert: n_fft must be a power of two >= 2^12");
  InverseSeries out;
  out.truncation_tol = tol;
  for (int attempt = 0; attempt <= kMaxDoublings; ++attempt, n_fft *= 2) {
    auto p = period_samples(s, n_fft);
    check_period(p, s.h);
    for (auto& v : p) v = 1.0 / v;
    out.c = coefficients(std::move(p), -s.r, s.h, tol, false);
    out.residual = convolution_residual(s, out.c);
    out.n_fft = n_fft;
    if (out.residual < kResidualTarget) return out;
  }
  std::ostringstream os;
  os << "wiener_invert: residual " << out.residual << " after " << kMaxDoublings << " doublings";
  throw NumericalError(os.str());
}

LatticeTriplet lattice_triplet(const LatticeSeries& s, std::size_t n_fft, double tol) {
  std::vector<cplx> c(s.coef);
  if (std::abs(pairwise_sum(c) - 1.0) > 1e-12) throw InputError("lattice_triplet: coefficients must sum to 1");
  if (n_fft < 4096 || !is_power_of_two(n_fft)) throw InputError("lattice_triplet: n_fft must be a power of two >= 2^12");
  LatticeTriplet out;
  for (int attempt = 0; attempt <= kMaxDoublings; ++attempt, n_fft *= 2) {
    const auto p = period_samples(s, n_fft);
    check_period(p, s.h);
    std::vector<double> arg(n_fft + 1, 0.0);
    bool smooth = true;
    for (std::size_t j = 1; j <= n_fft; ++j) {
      const double step = phase_step(p[j - 1], p[j % n_fft]);
      smooth = smooth && std::abs(step) < 0.5 * kPi;
      arg[j] = arg[j - 1] + step;
    }
    if (!smooth) continue;
    out.n = static_cast<int>(std::lround(arg[n_fft] / kTwoPi));
    std::vector<cplx> log_p(n_fft);
    for (std::size_t j = 0; j < n_fft; ++j) {
      const double w = kTwoPi * static_cast<double>(j) / static_cast<double>(n_fft);
      log_p[j] = cplx(std::log(std::abs(p[j])), arg[j] - out.n * w);
    }
    out.b = coefficients(std::move(log_p), 0.0, s.h, tol, true);
    out.max_imag = 0.0;
    for (auto& b : out.b.coef) {
      out.max_imag = std::max(out.max_imag, std::abs(b.imag()));
      b = cplx(b.real(), 0.0);
    }
    out.n_fft = n_fft;
    // Check against the series at points between the FFT nodes.
    out.recon_error = 0.0;
    const std::size_t check = 2 * n_fft;
    for (std::size_t j = 0; j < check; ++j) {
      const double w = kTwoPi * (static_cast<double>(j) + 0.5) / static_cast<double>(check);
      std::vector<cplx> terms;
      for (std::size_t i = 0; i < out.b.coef.size(); ++i)
        terms.push_back(out.b.coef[i] *
                        (std::polar(1.0, static_cast<double>(out.b.k_min + static_cast<long long>(i)) * w) - 1.0));
      const cplx model = std::exp(cplx(0.0, out.n * w) + pairwise_sum(terms));
      out.recon_error = std::max(out.recon_error, std::abs(model - s.eval_normalised(w)));
    }
    if (out.recon_error < kResidualTarget) return out;
  }
  std::ostringstream os;
  os << "lattice_triplet: reconstruction error " << out.recon_error << " after " << kMaxDoublings << " doublings";
  throw NumericalError(os.str());
}

MixedDecomposition mixed_decompose(const Distribution& dist, const std::optional<Lattice>& lattice) {
  const auto lat = lattice ? lattice : infer_lattice(dist);
  if (!lat) throw InputError("mixed_decompose: atoms do not sit on a lattice");
  MixedDecomposition out;
  out.lattice = lattice_series(dist, *lat);
  out.lattice_mass = dist.atom_mass();
  for (auto& c : out.lattice.coef) c /= out.lattice_mass;
  out.inverse = wiener_invert(out.lattice);

  const double q = out.lattice_mass;
  AtomicTransform& comp = out.companion;
  comp.atom_mass = q;
  comp.atom_location = 0.0;
  if (!dist.has_ac()) {
    out.companion_density = [](double) { return 0.0; };
    return out;
  }
  const Density f = *dist.ac();
  const LatticeSeries pd = out.lattice;
  const LatticeSeries inv = out.inverse.c;
  comp.ac = [f, pd, q](double z) { return (1.0 - q) * f.transform(z) / pd.eval(z); };
  comp.ac_grid = [f, pd, q](double z0, double dz, std::size_t n) {
    auto v = f.transform_grid(z0, dz, n);
    for (std::size_t j = 0; j < n; ++j) v[j] *= (1.0 - q) / pd.eval(z0 + dz * static_cast<double>(j));
    return v;
  };
  comp.ac_tv = (1.0 - q) * f.total_variation() * inv.l1_norm();
  comp.x_spread = std::max(1.0, f.essential_support().width() + inv.h * static_cast<double>(inv.coef.size()));
  out.companion_density = [f, inv, q](double x) {
    std::vector<double> t(inv.coef.size());
    for (std::size_t i = 0; i < inv.coef.size(); ++i) {
      const double at = inv.r + inv.h * static_cast<double>(inv.k_min + static_cast<long long>(i));
      t[i] = inv.coef[i].real() * f.pdf(x - at);
    }
    return (1.0 - q) * pairwise_sum(t);
  };

  // mu-hat = pi_d-hat * (q + (1 - q) c-hat f-hat), with c-hat from the truncated series.
  const double z_end = std::max(64.0, comp.ac_tv / q);
  constexpr std::size_t kCheck = 4096;
  for (std::size_t j = 0; j < kCheck; ++j) {
    const double z = z_end * static_cast<double>(j) / static_cast<double>(kCheck - 1);
    const cplx model = pd.eval(z) * (q + (1.0 - q) * inv.eval(z) * f.transform(z));
    out.identity_error = std::max(out.identity_error, std::abs(model - dist.charfn(z)));
  }
  return out;
}

void write_csv(std::ostream& out, const LatticeSeries& s) {
  out << "k,re,im\n";
  for (std::size_t i = 0; i < s.coef.size(); ++i)
    out << (s.k_min + static_cast<long long>(i)) << ',' << format_number(s.coef[i].real()) << ','
        << format_number(s.coef[i].imag()) << '\n';
}

}  // namespace qid
