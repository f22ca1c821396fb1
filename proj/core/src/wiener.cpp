#include "qid/wiener.hpp"

#include <cmath>

#include "qid/error.hpp"
#include "qid/fft.hpp"

namespace qid {

cplx WienerElement::eval(double z) const {
  std::vector<cplx> t(f.size());
  for (std::size_t k = 0; k < f.size(); ++k) t[k] = f[k] * std::polar(dx, (x0 + dx * static_cast<double>(k)) * z);
  return p + pairwise_sum(t);
}

double wiener_norm(const WienerElement& e) {
  std::vector<double> m(e.f.size());
  for (std::size_t k = 0; k < e.f.size(); ++k) m[k] = std::abs(e.f[k]) * e.dx;
  return std::abs(e.p) + pairwise_sum(m);
}

WienerElement product(const WienerElement& a, const WienerElement& b) {
  if (a.f.empty()) {
    WienerElement out = b;
    out.p = a.p * b.p;
    for (auto& v : out.f) v *= a.p;
    return out;
  }
  if (b.f.empty()) return product(b, a);
  if (std::abs(a.dx - b.dx) > 1e-12 * a.dx) throw InputError("wiener product: factors must share the grid step");
  const double dx = a.dx;
  WienerElement out;
  out.p = a.p * b.p;
  out.dx = dx;
  out.x0 = a.x0 + b.x0;
  const std::size_t len = a.f.size() + b.f.size() - 1;
  const std::size_t n = fft::next_power_of_two(len);
  std::vector<cplx> fa(n), fb(n);
  std::copy(a.f.begin(), a.f.end(), fa.begin());
  std::copy(b.f.begin(), b.f.end(), fb.begin());
  fft::transform(fa, -1);
  fft::transform(fb, -1);
  for (std::size_t k = 0; k < n; ++k) fa[k] *= fb[k];
  fft::transform(fa, +1);
  out.f.assign(len, cplx{});
  for (std::size_t k = 0; k < len; ++k) out.f[k] = fa[k] * (dx / static_cast<double>(n));

  // Cross terms p_a f_b and p_b f_a live on their own offsets; place them on the
  // product grid, which requires the offsets to differ by whole steps.
  auto add = [&out, dx](const WienerElement& src, cplx scale, double shift) {
    const double offset = (src.x0 + shift - out.x0) / dx;
    const auto k0 = static_cast<long long>(std::llround(offset));
    if (std::abs(offset - static_cast<double>(k0)) > 1e-9) throw InputError("wiener product: grids are not aligned");
    if (k0 < 0) {
      out.f.insert(out.f.begin(), static_cast<std::size_t>(-k0), cplx{});
      out.x0 += static_cast<double>(k0) * dx;
    }
    const std::size_t base = static_cast<std::size_t>(std::max<long long>(k0, 0));
    if (base + src.f.size() > out.f.size()) out.f.resize(base + src.f.size(), cplx{});
    for (std::size_t k = 0; k < src.f.size(); ++k) out.f[base + k] += scale * src.f[k];
  };
  add(b, a.p, 0.0);
  add(a, b.p, 0.0);
  return out;
}

WienerElement wiener_unit(double dx) {
  WienerElement e;
  e.p = 1.0;
  e.dx = dx;
  return e;
}

}  // namespace qid
