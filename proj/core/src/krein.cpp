#include "qid/krein.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qid/error.hpp"
#include "qid/fft.hpp"

namespace qid {

namespace {

constexpr double kImHardLimit = 1e-4;
constexpr double kXWindowCap = 64.0;
constexpr std::size_t kMaxWindingPoints = std::size_t{1} << 20;

cplx centred(const AtomicTransform& f, double z) {
  cplx v = f.atom_mass;
  if (f.has_ac()) v += f.ac(z) * std::polar(1.0, -f.atom_location * z);
  return v;
}

std::vector<cplx> centred_grid(const AtomicTransform& f, double z0, double dz, std::size_t n) {
  std::vector<cplx> out(n, cplx(f.atom_mass, 0.0));
  if (!f.has_ac()) return out;
  const auto a = f.ac_grid(z0, dz, n);
  for (std::size_t j = 0; j < n; ++j)
    out[j] += a[j] * std::polar(1.0, -f.atom_location * (z0 + dz * static_cast<double>(j)));
  return out;
}

WindingResult centred_winding(const AtomicTransform& f, const RefineConfig& refine, double& z_w, std::size_t& n_w) {
  const double z_tail = f.ac_tv / f.atom_mass;
  z_w = std::max(64.0, 1.25 * z_tail);
  const double spacing = kPi / (8.0 * std::max(1.0, f.x_spread));
  n_w = std::clamp(fft::next_power_of_two(static_cast<std::size_t>(std::ceil(2.0 * z_w / spacing))),
                   std::size_t{1024}, kMaxWindingPoints);
  CharFunctionGrid grid;
  grid.z_max = z_w;
  grid.values = centred_grid(f, -z_w, 2.0 * z_w / static_cast<double>(n_w - 1), n_w);
  return winding_index(grid, [&f](double z) { return centred(f, z); }, refine);
}

// Least-squares weights of i z/(1+z^2) and 1/(1+z^2) against ghat on the outer half of the band.
void fit_origin_terms(std::span<const double> z, std::span<const cplx> ghat, double z_max, double& jump,
                      double& kink) {
  std::vector<double> num_j, den_j, num_k, den_k;
  for (std::size_t j = 0; j < z.size(); ++j) {
    if (std::abs(z[j]) < 0.5 * z_max) continue;
    const double d = 1.0 + z[j] * z[j];
    const double phi1 = z[j] / d;
    const double phi2 = 1.0 / d;
    num_j.push_back(ghat[j].imag() * phi1);
    den_j.push_back(phi1 * phi1);
    num_k.push_back(ghat[j].real() * phi2);
    den_k.push_back(phi2 * phi2);
  }
  jump = num_j.empty() ? 0.0 : pairwise_sum(num_j) / pairwise_sum(den_j);
  kink = num_k.empty() ? 0.0 : pairwise_sum(num_k) / pairwise_sum(den_k);
}

}  // namespace

cplx AtomicTransform::charfn(double z) const {
  cplx v = std::polar(atom_mass, atom_location * z);
  if (has_ac()) v += ac(z);
  return v;
}

std::vector<cplx> AtomicTransform::charfn_grid(double z0, double dz, std::size_t n) const {
  std::vector<cplx> out = has_ac() ? ac_grid(z0, dz, n) : std::vector<cplx>(n, cplx{});
  for (std::size_t j = 0; j < n; ++j) out[j] += std::polar(atom_mass, atom_location * (z0 + dz * static_cast<double>(j)));
  return out;
}

AtomicTransform atomic_transform(const Distribution& dist) {
  if (dist.atoms().size() != 1) throw InputError("krein: the law must carry exactly one atom");
  AtomicTransform f;
  f.atom_mass = dist.atoms().front().p;
  f.atom_location = dist.atoms().front().x;
  if (dist.has_ac()) {
    const Density& d = *dist.ac();
    const double w = dist.ac_weight();
    f.ac = [d, w](double z) { return w * d.transform(z); };
    f.ac_grid = [d, w](double z0, double dz, std::size_t n) {
      auto v = d.transform_grid(z0, dz, n);
      for (auto& x : v) x *= w;
      return v;
    };
    f.ac_tv = w * d.total_variation();
    const Interval s = dist.essential_support();
    f.x_spread = std::max(1.0, s.width());
  }
  return f;
}

std::vector<cplx> q_correction(std::span<const double> z, int m) {
  std::vector<cplx> out(z.size(), cplx(1.0, 0.0));
  if (m == 0) return out;
  for (std::size_t j = 0; j < z.size(); ++j) out[j] = std::polar(1.0, -2.0 * m * std::atan(z[j]));
  return out;
}

double im_residual(std::span<const cplx> g) {
  double worst = 0.0;
  for (const auto& v : g) worst = std::max(worst, std::abs(v.imag()));
  return worst;
}

double select_band(const AtomicTransform& f, const KreinOptions& opt) {
  if (opt.z_max) return *opt.z_max;
  if (!f.has_ac()) return 64.0;
  double z_max = 64.0;
  for (; z_max < opt.z_cap; z_max *= 2.0) {
    constexpr std::size_t kProbe = 128;
    const double dz = 0.5 * z_max / static_cast<double>(kProbe - 1);
    const auto right = centred_grid(f, 0.5 * z_max, dz, kProbe);
    const auto left = centred_grid(f, -z_max, dz, kProbe);
    double worst = 0.0;
    for (std::size_t j = 0; j < kProbe; ++j) {
      worst = std::max(worst, std::abs(right[j] / f.atom_mass - 1.0));
      worst = std::max(worst, std::abs(left[j] / f.atom_mass - 1.0));
    }
    if (worst <= opt.band_tol) break;
  }
  return std::min(z_max, opt.z_cap);
}

ExtractedDensity extract_g(const AtomicTransform& f, const KreinOptions& opt) {
  if (!(f.atom_mass > 0.0)) throw InputError("krein: atom mass must be > 0");
  if (opt.n_points < 1024 || !is_power_of_two(opt.n_points))
    throw InputError("krein: n_points must be a power of two >= 1024");
  ExtractedDensity out;
  out.n_points = opt.n_points;
  out.q_est = cplx(std::log(f.atom_mass), 0.0);
  if (!f.has_ac()) return out;

  out.winding = centred_winding(f, opt.refine, out.z_winding, out.n_winding);
  out.index = out.winding.index;

  const std::size_t n = opt.n_points;
  const double z_max = select_band(f, opt);
  if (!(z_max > 0.0)) throw InputError("krein: z_max must be > 0");
  out.z_max = z_max;
  const double dz = 2.0 * z_max / static_cast<double>(n);
  std::vector<double> z(n);
  for (std::size_t j = 0; j < n; ++j) z[j] = (static_cast<double>(j) - 0.5 * static_cast<double>(n) + 0.5) * dz;
  const auto values = centred_grid(f, z.front(), dz, n);
  const auto arg = continuous_arg(z, values, [&f](double s) { return centred(f, s); }, opt.refine);

  // h = log F - 2im atan z; its limit at both ends is log p + 2 pi i k.
  std::vector<cplx> ghat(n);
  for (std::size_t j = 0; j < n; ++j)
    ghat[j] = cplx(std::log(std::abs(values[j])), arg[j] - 2.0 * out.index * std::atan(z[j]));
  const double im_hi = ghat.back().imag();
  const double im_lo = ghat.front().imag();
  const double k_hi = std::round(im_hi / kTwoPi);
  const double k_lo = std::round(im_lo / kTwoPi);
  if (std::abs(im_hi - kTwoPi * k_hi) >= 0.5 * kPi || std::abs(im_lo - kTwoPi * k_lo) >= 0.5 * kPi || k_hi != k_lo) {
    std::ostringstream os;
    os << "krein: tail constants at +/- z_max disagree (Im h = " << im_lo << ", " << im_hi
       << "); increase z_max";
    throw NumericalError(os.str());
  }
  out.q_est = cplx(std::log(f.atom_mass), kTwoPi * k_hi);
  for (auto& v : ghat) v -= out.q_est;
  {
    const std::size_t outer = std::max<std::size_t>(1, n / 20);
    std::vector<double> tail;
    for (std::size_t j = 0; j < outer; ++j) {
      tail.push_back(std::abs(ghat[j]));
      tail.push_back(std::abs(ghat[n - 1 - j]));
    }
    out.tail_residual = pairwise_sum(tail) / static_cast<double>(tail.size());
  }

  fit_origin_terms(z, ghat, z_max, out.origin_jump, out.origin_kink);
  for (std::size_t j = 0; j < n; ++j)
    ghat[j] -= cplx(out.origin_kink, out.origin_jump * z[j]) / (1.0 + z[j] * z[j]);

  // g(x_l) = (dz/2pi) sum_j ghat_j e^{-i x_l z_j} on x_l = l dx, |l| < N/2.
  const std::size_t oversample = std::max<std::size_t>(2, fft::next_power_of_two(static_cast<std::size_t>(std::ceil(512.0 / z_max))));
  const std::size_t big = n * oversample;
  std::vector<cplx> buf(big, cplx{});
  for (std::size_t j = 0; j < n; ++j) buf[(j + big - n / 2) % big] = ghat[j];
  fft::transform(buf, -1);
  const double dx = kTwoPi / (static_cast<double>(big) * dz);
  const double x_half = kPi / dz;
  out.x_window = std::min(kXWindowCap, 0.5 * x_half);
  out.dx = dx;
  const auto l_max = static_cast<long long>(std::floor(out.x_window / dx));
  out.x0 = -static_cast<double>(l_max) * dx;
  out.g.resize(static_cast<std::size_t>(2 * l_max + 1));
  const auto nn = static_cast<long long>(big);
  std::vector<double> outside;
  for (long long l = -nn / 2; l < nn / 2; ++l) {
    const double x = static_cast<double>(l) * dx;
    const cplx v = dz / kTwoPi * std::polar(1.0, -0.5 * x * dz) * buf[static_cast<std::size_t>((l + nn) % nn)];
    if (l < -l_max || l > l_max) {
      outside.push_back(std::abs(v) * dx);
    } else {
      out.g[static_cast<std::size_t>(l + l_max)] = v;
    }
  }
  out.truncated_mass = pairwise_sum(outside);
  return out;
}

ExtractedDensity extract_g(const Distribution& dist, const KreinOptions& opt) {
  return extract_g(atomic_transform(dist), opt);
}

KreinReport assemble_triplet(const AtomicTransform& f, const KreinOptions& opt) {
  const ExtractedDensity ex = extract_g(f, opt);
  KreinReport rep;
  rep.triplet.drift = f.atom_location;
  rep.triplet.location_shift = f.atom_location;
  rep.triplet.index = ex.index;
  rep.triplet.origin_jump = ex.origin_jump;
  rep.triplet.origin_kink = ex.origin_kink;
  rep.im_residual = im_residual(ex.g);
  rep.q_est = ex.q_est;
  rep.tail_residual = ex.tail_residual;
  rep.truncated_mass = ex.truncated_mass;
  rep.winding = ex.winding;
  rep.z_winding = ex.z_winding;
  rep.n_winding = ex.n_winding;
  rep.z_max = ex.z_max;
  rep.n_points = ex.n_points;
  rep.dx = ex.dx;
  rep.x_window = ex.x_window;
  if (!f.has_ac()) return rep;
  if (rep.im_residual > kImHardLimit) {
    std::ostringstream os;
    os << "krein: imaginary part of the extracted density reaches " << rep.im_residual;
    throw NumericalError(os.str());
  }
  std::vector<double> re(ex.g.size());
  for (std::size_t k = 0; k < re.size(); ++k) re[k] = ex.g[k].real();
  rep.triplet.density = Tabulated(ex.x0, ex.dx, std::move(re));

  const std::size_t n = ex.n_points;
  const double dz = 2.0 * ex.z_max / static_cast<double>(n);
  const double z0 = (0.5 - 0.5 * static_cast<double>(n)) * dz;
  const auto recon = reconstruct_charfn(rep.triplet, z0, dz, n);
  const auto exact = f.charfn_grid(z0, dz, n);
  for (std::size_t j = 0; j < n; ++j) rep.recon_error = std::max(rep.recon_error, std::abs(recon[j] - exact[j]));
  return rep;
}

KreinReport assemble_triplet(const Distribution& dist, const KreinOptions& opt) {
  return assemble_triplet(atomic_transform(dist), opt);
}

}  // namespace qid
