#include "qid/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qid {

namespace {

template <typename T>
T cascade(std::span<const T> v) {
  if (v.size() <= 8) {
    T acc{};
    for (const T& x : v) acc += x;
    return acc;
  }
  const std::size_t half = v.size() / 2;
  return cascade(v.first(half)) + cascade(v.subspan(half));
}

}  // namespace

double pairwise_sum(std::span<const double> v) { return cascade(v); }
cplx pairwise_sum(std::span<const cplx> v) { return cascade(v); }

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_pdf(double x) { return std::exp(-0.5 * x * x) * std::numbers::inv_sqrtpi / std::numbers::sqrt2; }

double golden_section_min(const std::function<double(double)>& f, double lo, double hi,
                          double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  double best_x = fc < fd ? c : d;
  double best_f = std::min(fc, fd);
  for (int iter = 0; iter < 200 && (b - a) > tol; ++iter) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
      if (fc < best_f) best_f = fc, best_x = c;
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
      if (fd < best_f) best_f = fd, best_x = d;
    }
  }
  return best_x;
}

double bisect_root(const std::function<double(double)>& f, double lo, double hi, double tol) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0) == (fhi > 0)) throw std::invalid_argument("bisect_root: no sign change");
  for (int iter = 0; iter < 300 && hi - lo > tol; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

QuadratureRule gauss_legendre(std::size_t order, double a, double b) {
  QuadratureRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  // Newton iteration on the Legendre recurrence.
  for (std::size_t i = 0; i < order; ++i) {
    double x = std::cos(kPi * (static_cast<double>(i) + 0.75) / (static_cast<double>(order) + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t k = 2; k <= order; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
        p0 = p1;
        p1 = pk;
      }
      dp = static_cast<double>(order) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[i] = 0.5 * (b - a) * x + 0.5 * (b + a);
    rule.weights[i] = (b - a) / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

}  // namespace qid
