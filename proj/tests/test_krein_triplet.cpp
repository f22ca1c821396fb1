#include <doctest.h>

#include <vector>

#include "oracles.hpp"
#include "qid/error.hpp"
#include "qid/krein.hpp"
#include "qid/triplet.hpp"
#include "qid/verdict.hpp"

using namespace qid;

namespace {

Distribution exp_law() { return Distribution::atom_plus(0.0, 0.5, Density(Exponential{1.0, 0.0})); }
Distribution index_two_law() { return Distribution::atom_plus(0.0, 0.001, Density(Normal{1.0, 1.0})); }

double relative_l1(const QuasiLevyTriplet& tr, const std::function<double(double)>& ref, double lo, double hi) {
  const std::size_t n = 20000;
  const double h = (hi - lo) / n;
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double x = lo + h * (static_cast<double>(k) + 0.5);
    num += std::abs(tr.regular_density(x) - ref(x)) * h;
    den += std::abs(ref(x)) * h;
  }
  return num / den;
}

double l1_difference(const QuasiLevyTriplet& a, const QuasiLevyTriplet& b) {
  const double lo = std::max(a.density.x0(), b.density.x0());
  const double hi = std::min(a.density.x_end(), b.density.x_end());
  const std::size_t n = 200000;
  const double h = (hi - lo) / n;
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double x = lo + h * (static_cast<double>(k) + 0.5);
    s += std::abs(a.regular_density(x) - b.regular_density(x)) * h;
  }
  return s;
}

}  // namespace

TEST_CASE("q correction") {
  const std::vector<double> z{-1e8, -2.0, 0.0, 0.5, 3.0, 1e8};
  for (cplx v : q_correction(z, 0)) CHECK(std::abs(v - 1.0) < 1e-15);
  const auto one = q_correction(z, 1);
  CHECK(std::abs(one[2] - 1.0) < 1e-15);
  for (std::size_t j = 0; j < z.size(); ++j) {
    CHECK(std::abs(one[j]) == doctest::Approx(1.0));
    // Q(0) Q(z)^{-1} with Q(z) = (z - i)/(z + i), Q(0) = -1.
    const cplx direct = -(z[j] + cplx(0, 1)) / (z[j] - cplx(0, 1));
    CHECK(std::abs(one[j] - direct) < 1e-12);
  }
  const auto two = q_correction(z, 2);
  CHECK(std::abs(two.front() - 1.0) < 1e-7);
  CHECK(std::abs(two.back() - 1.0) < 1e-7);
}

TEST_CASE("point mass has the trivial triplet") {
  const auto r = assemble_triplet(Distribution::dirac(3.5));
  CHECK(r.triplet.gaussian_variance == 0.0);
  CHECK(r.triplet.drift == doctest::Approx(3.5));
  CHECK(r.triplet.index == 0);
  CHECK((r.triplet.density.size() == 0 || r.triplet.density.abs_integral() < 1e-12));
}

TEST_CASE("exponential atom law matches the closed-form density") {
  const auto r = assemble_triplet(exp_law());
  CHECK(r.triplet.index == 0);
  CHECK(r.triplet.finite_variation());
  CHECK(std::abs(r.triplet.drift) < 1e-12);
  CHECK(r.im_residual < 1e-6);
  CHECK(r.recon_error < 1e-4);
  CHECK(r.triplet.regular_density(1.0) == doctest::Approx(oracle::exp_atom_density_at_1).epsilon(1e-5));
  CHECK(relative_l1(r.triplet, oracle::exp_atom_density, 0.01, 20.0) < 1e-3);
  CHECK(std::abs(r.triplet.regular_density(-1.0)) < 1e-6);
}

TEST_CASE("atom plus Gaussian: index two and infinite variation") {
  const auto r = assemble_triplet(index_two_law());
  CHECK(r.triplet.index == 2);
  CHECK(r.winding.index == 2);
  CHECK(std::abs(r.winding.raw - 2.0) < 0.05);
  CHECK_FALSE(r.triplet.finite_variation());
  CHECK(r.im_residual < 1e-6);
  CHECK(r.recon_error < 1e-4);
  CHECK(reconstruction_error(r.triplet, index_two_law(), r.z_max, 8192) < 1e-4);
}

TEST_CASE("singular term alone reconstructs the elementary factor") {
  QuasiLevyTriplet tr;
  tr.index = 1;
  for (double z : {-7.0, -0.3, 0.0, 1.0, 25.0}) {
    const cplx v = reconstruct_charfn(tr, z);
    CHECK(std::abs(v) == doctest::Approx(1.0));
    const cplx expected = -(z - cplx(0, 1)) / (z + cplx(0, 1));
    CHECK(std::abs(v - expected) < 1e-12);
  }
}

TEST_CASE("imaginary residual") {
  std::vector<cplx> g{1.0, 2.0, -0.5};
  CHECK(im_residual(g) == 0.0);
  for (auto& v : g) v += cplx(0.0, 0.01);
  CHECK(im_residual(g) == doctest::Approx(0.01));
}

TEST_CASE("a non-Hermitian input is rejected by the imaginary residual") {
  AtomicTransform f;
  f.atom_mass = 0.5;
  f.ac = [](double z) { return cplx(0.3, 0.3) / (1.0 + z * z); };
  f.ac_grid = [&f](double z0, double dz, std::size_t n) {
    std::vector<cplx> v(n);
    for (std::size_t j = 0; j < n; ++j) v[j] = f.ac(z0 + dz * static_cast<double>(j));
    return v;
  };
  f.ac_tv = 0.43;
  f.x_spread = 20.0;
  CHECK_THROWS_AS(assemble_triplet(f), NumericalError);
}

TEST_CASE("property: shifting the law moves only the drift") {
  const double c = 1.3;
  const auto a = assemble_triplet(exp_law());
  const auto b = assemble_triplet(exp_law().shifted(c));
  CHECK(b.triplet.drift - a.triplet.drift == doctest::Approx(c));
  CHECK(a.triplet.index == b.triplet.index);
  CHECK(l1_difference(a.triplet, b.triplet) < 1e-8);
}

TEST_CASE("property: extraction is stable under grid refinement") {
  for (const auto& law : {exp_law(), index_two_law()}) {
    KreinOptions coarse, fine;
    coarse.n_points = std::size_t{1} << 14;
    fine.n_points = std::size_t{1} << 15;
    const auto a = assemble_triplet(law, coarse);
    const auto b = assemble_triplet(law, fine);
    CHECK(a.triplet.index == b.triplet.index);
    CHECK(l1_difference(a.triplet, b.triplet) < 1e-5);
  }
}

TEST_CASE("property: finite variation exactly when the index vanishes") {
  for (const auto& law : {exp_law(), index_two_law(), Distribution::dirac()}) {
    const auto r = assemble_triplet(law);
    CHECK(r.triplet.finite_variation() == (r.triplet.index == 0));
    CHECK(std::isfinite(r.triplet.truncated_variation()));
  }
}
