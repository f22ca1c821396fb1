#include "qid/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstdint>

namespace qid::fft {

void transform(std::vector<cplx>& data, int sign) {
  if (data.empty()) return;
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(data.size()), buf, buf,
                                    sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);
}

std::size_t next_power_of_two(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

std::vector<cplx> chirp_z(std::span<const cplx> a, double theta, std::size_t m) {
  const std::size_t n = a.size();
  if (n == 0 || m == 0) return std::vector<cplx>(m);
  // jk = (j^2 + k^2 - (j-k)^2) / 2; squares are formed exactly in integers.
  auto chirp = [theta](std::int64_t k) {
    const double half_sq = 0.5 * static_cast<double>(k * k);
    return std::polar(1.0, theta * half_sq);
  };
  const std::size_t len = next_power_of_two(n + m - 1);
  std::vector<cplx> u(len), v(len);
  for (std::size_t k = 0; k < n; ++k) u[k] = a[k] * chirp(static_cast<std::int64_t>(k));
  for (std::size_t j = 0; j < m; ++j) v[j] = std::conj(chirp(static_cast<std::int64_t>(j)));
  for (std::size_t k = 1; k < n; ++k) v[len - k] = std::conj(chirp(static_cast<std::int64_t>(k)));
  transform(u, -1);
  transform(v, -1);
  for (std::size_t i = 0; i < len; ++i) u[i] *= v[i];
  transform(u, +1);
  std::vector<cplx> out(m);
  const double scale = 1.0 / static_cast<double>(len);
  for (std::size_t j = 0; j < m; ++j) out[j] = u[j] * scale * chirp(static_cast<std::int64_t>(j));
  return out;
}

}  // namespace qid::fft
