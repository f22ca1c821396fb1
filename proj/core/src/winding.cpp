#include "qid/winding.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "qid/error.hpp"
#include "qid/report.hpp"

namespace qid {

namespace {

void check_modulus(cplx f, double z, const RefineConfig& cfg) {
  if (!(std::abs(f) > cfg.min_modulus)) {
    std::ostringstream os;
    os << "distinguished log: |F| = " << std::abs(f) << " at z = " << z << " (near-zero)";
    throw NumericalError(os.str());
  }
}

// Phase increment from (za, fa) to (zb, fb), bisecting while the step is large.
double tracked_step(double za, cplx fa, double zb, cplx fb, const Evaluator& eval, const RefineConfig& cfg,
                    int depth) {
  if (std::abs(fb / fa - 1.0) <= cfg.ratio_limit) return phase_step(fa, fb);
  if (depth >= cfg.max_depth) {
    std::ostringstream os;
    os << "distinguished log: bisection budget exhausted on [" << std::min(za, zb) << ", " << std::max(za, zb)
       << "]";
    throw RefinementError(os.str(), std::min(za, zb), std::max(za, zb));
  }
  const double zm = 0.5 * (za + zb);
  const cplx fm = eval(zm);
  check_modulus(fm, zm, cfg);
  return tracked_step(za, fa, zm, fm, eval, cfg, depth + 1) + tracked_step(zm, fm, zb, fb, eval, cfg, depth + 1);
}

double tail_mean(std::span<const double> v) { return pairwise_sum(v) / static_cast<double>(v.size()); }

}  // namespace

std::vector<double> continuous_arg(std::span<const double> z, std::span<const cplx> f, const Evaluator& eval,
                                   const RefineConfig& cfg) {
  const std::size_t n = z.size();
  if (n == 0 || f.size() != n) throw InputError("continuous_arg: node and value counts differ");
  for (std::size_t j = 0; j < n; ++j) check_modulus(f[j], z[j], cfg);

  const cplx f0 = eval(0.0);
  check_modulus(f0, 0.0, cfg);
  const double arg0 = std::arg(f0);
  std::vector<double> out(n);
  // First node at or right of the origin.
  const auto right = static_cast<std::size_t>(std::lower_bound(z.begin(), z.end(), 0.0) - z.begin());
  if (right < n) {
    double acc = arg0 + tracked_step(0.0, f0, z[right], f[right], eval, cfg, 0);
    out[right] = acc;
    for (std::size_t j = right + 1; j < n; ++j) {
      acc += tracked_step(z[j - 1], f[j - 1], z[j], f[j], eval, cfg, 0);
      out[j] = acc;
    }
  }
  if (right > 0) {
    double acc = arg0 + tracked_step(0.0, f0, z[right - 1], f[right - 1], eval, cfg, 0);
    out[right - 1] = acc;
    for (std::size_t j = right - 1; j-- > 0;) {
      acc += tracked_step(z[j + 1], f[j + 1], z[j], f[j], eval, cfg, 0);
      out[j] = acc;
    }
  }
  return out;
}

LogGrid distinguished_log(const CharFunctionGrid& grid, const Evaluator& eval, const RefineConfig& cfg) {
  LogGrid out;
  out.z.resize(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) out.z[j] = grid.z(j);
  const auto arg = continuous_arg(out.z, grid.values, eval, cfg);
  out.values.resize(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) out.values[j] = cplx(std::log(std::abs(grid.values[j])), arg[j]);
  return out;
}

WindingResult winding_index(const CharFunctionGrid& grid, const Evaluator& eval, const RefineConfig& cfg) {
  std::vector<double> z(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) z[j] = grid.z(j);
  const auto arg = continuous_arg(z, grid.values, eval, cfg);
  const std::size_t outer = std::max<std::size_t>(1, grid.size() / 20);
  const std::span<const double> all(arg);
  const double hi = tail_mean(all.last(outer));
  const double lo = tail_mean(all.first(outer));
  WindingResult res;
  res.raw = (hi - lo) / kTwoPi;
  res.index = static_cast<int>(std::lround(res.raw));
  if (std::abs(res.raw - res.index) >= 0.05) {
    std::ostringstream os;
    os << "winding_index: tail not settled (raw winding " << res.raw << "); increase z_max";
    throw NumericalError(os.str());
  }
  return res;
}

WindingResult winding_index(const CharFunctionGrid& grid, const Distribution& dist, const RefineConfig& cfg) {
  if (dist.atoms().size() != 1)
    throw InputError("winding_index: the law must carry exactly one atom for the index to be defined");
  const double x0 = dist.atoms().front().x;
  CharFunctionGrid centred = grid;
  for (std::size_t j = 0; j < centred.size(); ++j) centred.values[j] *= std::polar(1.0, -x0 * grid.z(j));
  return winding_index(
      centred, [&dist, x0](double z) { return dist.charfn(z) * std::polar(1.0, -x0 * z); }, cfg);
}

void write_csv(std::ostream& out, const LogGrid& grid) {
  out << "z,re,im\n";
  for (std::size_t j = 0; j < grid.z.size(); ++j)
    out << format_number(grid.z[j]) << ',' << format_number(grid.values[j].real()) << ','
        << format_number(grid.values[j].imag()) << '\n';
}

}  // namespace qid
