#include <doctest.h>

#include <random>

#include "qid/constructions.hpp"
#include "qid/error.hpp"
#include "qid/triplet.hpp"
#include "qid/verdict.hpp"

using namespace qid;

namespace {

Distribution gaussian(double mean, double var) { return Distribution::continuous(Density(Normal{mean, var})); }

double charfn_gap(const Distribution& a, const Distribution& b) {
  double worst = 0.0;
  for (double z = -20.0; z <= 20.0; z += 0.25) worst = std::max(worst, std::abs(a.charfn(z) - b.charfn(z)));
  return worst;
}

}  // namespace

TEST_CASE("normal mixtures") {
  const std::vector<double> w{0.5, 0.5}, m{0.0, 0.0}, v{1.0, 2.0};
  CHECK(qid_verdict(normal_mixture(w, m, v)).qid);

  const std::vector<double> w1{1.0}, m1{0.0}, v1{1.0};
  const auto single = qid_verdict(normal_mixture(w1, m1, v1));
  REQUIRE(single.qid);
  CHECK(single.report->triplet.gaussian_variance == doctest::Approx(1.0));
  CHECK(std::abs(single.report->triplet.drift) < 1e-12);
  CHECK(single.report->triplet.index == 0);

  const std::vector<double> wp{0.001, 0.999}, mp{0.0, 1.0}, vp{1.0, 2.0};
  const auto f = factor_normal_mixture(normal_mixture(wp, mp, vp));
  CHECK(f.variance == doctest::Approx(1.0));
  CHECK(f.mean == doctest::Approx(0.0));
  CHECK(f.cofactor.atom_mass() == doctest::Approx(0.001));
  const auto r = qid_verdict(normal_mixture(wp, mp, vp));
  REQUIRE(r.qid);
  CHECK(r.report->triplet.index == 2);

  const std::vector<double> bad{0.5, 0.6};
  CHECK_THROWS_AS(normal_mixture(bad, m, v), InputError);
}

TEST_CASE("variance mixtures") {
  MixingDistribution one;
  one.atoms = {{1.0, 1.0}};
  CHECK(charfn_gap(variance_mixture(one), gaussian(0.0, 1.0)) < 1e-14);

  MixingDistribution two;
  two.atoms = {{1.0, 0.5}, {2.0, 0.5}};
  CHECK(qid_verdict(variance_mixture(two)).qid);

  MixingDistribution cont;
  cont.atoms = {{1.0, 0.25}};
  cont.ac_weight = 0.75;
  cont.ac = Uniform{1.0, 2.0};
  const auto v = qid_verdict(variance_mixture(cont));
  REQUIRE(v.qid);
  CHECK(v.report->recon_error < 1e-4);

  MixingDistribution bad;
  bad.atoms = {{0.0, 1.0}};
  CHECK_THROWS_AS(variance_mixture(bad), InputError);
  MixingDistribution gap;
  gap.atoms = {{1.0, 0.5}};
  gap.ac_weight = 0.5;
  gap.ac = Uniform{0.5, 2.0};
  CHECK_THROWS_AS(variance_mixture(gap), InputError);
}

TEST_CASE("scaling a triplet") {
  const auto law = Distribution::atom_plus(0.0, 0.001, Density(Normal{1.0, 1.0}));
  const auto tr = qid_verdict(law).report->triplet;
  const auto same = scale_triplet(tr, 1.0);
  CHECK(same.drift == tr.drift);
  for (double t : {0.5, 2.0}) {
    const auto s = scale_triplet(tr, t);
    CHECK(s.index == tr.index);
    for (double z : {-3.0, 0.4, 7.0}) CHECK(std::abs(reconstruct_charfn(s, z) - reconstruct_charfn(tr, t * z)) < 1e-10);
  }
  QuasiLevyTriplet gauss;
  gauss.gaussian_variance = 1.0;
  gauss.drift = 3.0;
  const auto g = scale_triplet(gauss, 0.5);
  CHECK(g.gaussian_variance == doctest::Approx(0.25));
  CHECK(g.drift == doctest::Approx(1.5));
  CHECK_THROWS_AS(scale_triplet(gauss, 0.0), InputError);
}

TEST_CASE("convolution") {
  const auto nn = convolve(gaussian(1.0, 1.0), gaussian(-2.0, 3.0));
  CHECK(charfn_gap(nn, gaussian(-1.0, 4.0)) < 1e-14);

  const auto un = convolve(Distribution::continuous(Density(Uniform{-1.0, 1.0})), gaussian(0.0, 1.0));
  for (double x : {-2.0, 0.0, 0.7, 3.0}) {
    const double ref = 0.5 * (normal_cdf(x + 1.0) - normal_cdf(x - 1.0));
    CHECK(un.ac()->pdf(x) == doctest::Approx(ref).epsilon(1e-6));
  }

  const auto ee = convolve(Distribution::continuous(Density(Exponential{})), Distribution::continuous(Density(Exponential{})));
  for (double x : {0.5, 1.0, 3.0}) CHECK(std::abs(ee.ac()->pdf(x) - x * std::exp(-x)) < 1e-4);

  const auto shifted = convolve(Distribution::dirac(2.0), gaussian(0.0, 1.0));
  CHECK(charfn_gap(shifted, gaussian(2.0, 1.0)) < 1e-6);
}

TEST_CASE("interpolation path") {
  const auto a = gaussian(0.0, 1.0);
  const auto b = Distribution::dirac(2.0);
  CHECK(charfn_gap(interpolate(a, b, 1.0), a) == 0.0);
  CHECK(charfn_gap(interpolate(a, b, 0.0), b) == 0.0);
  CHECK(charfn_gap(interpolate(a, b, 0.5), gaussian(1.0, 0.25)) < 1e-6);
  CHECK(charfn_gap(interpolate(Distribution::dirac(), Distribution::dirac(), 0.3), Distribution::dirac()) < 1e-12);
  for (double t : {0.2, 0.5, 0.9}) {
    const double var = t * t + (1.0 - t) * (1.0 - t);
    CHECK(charfn_gap(interpolate(a, gaussian(0.0, 1.0), t), gaussian(0.0, var)) < 1e-12);
  }
  CHECK_THROWS_AS(interpolate(a, b, 1.5), InputError);
}

TEST_CASE("Levy distance") {
  const auto d = levy_distance(Distribution::dirac(0.0), Distribution::dirac(0.3));
  CHECK(std::abs(d.distance - 0.3) <= d.grid_spacing);
  CHECK(levy_distance(gaussian(0.0, 1.0), gaussian(0.0, 1.0)).distance < 1e-9);
  const double ab = levy_distance(gaussian(0.0, 1.0), gaussian(0.1, 1.0)).distance;
  const double ba = levy_distance(gaussian(0.1, 1.0), gaussian(0.0, 1.0)).distance;
  CHECK(ab == ba);
  CHECK(ab > 0.0);
  CHECK(ab <= 0.1);
}

TEST_CASE("property: Levy distance satisfies the triangle inequality") {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  auto draw = [&] {
    return Distribution::atom_plus(U(rng) - 0.5, 0.2 + 0.6 * U(rng), Density(Normal{2.0 * U(rng) - 1.0, 0.2 + U(rng)}));
  };
  for (int k = 0; k < 5; ++k) {
    const auto x = draw(), y = draw(), z = draw();
    const auto xy = levy_distance(x, y), yz = levy_distance(y, z), xz = levy_distance(x, z);
    CHECK(xz.distance <= xy.distance + yz.distance + 2.0 * xz.grid_spacing);
  }
}

TEST_CASE("non-QID sequence") {
  const auto mu = gaussian(0.0, 1.0);
  const auto nu = Distribution::continuous(Density(Uniform{-1.0, 1.0}));
  double last = 1.0;
  for (std::size_t n : {1, 5, 10}) {
    const auto s = nonqid_sequence(mu, nu, n);
    REQUIRE(s.certificate.has_zero());
    CHECK(s.certificate.refined_location == doctest::Approx(std::numbers::pi * static_cast<double>(n)).epsilon(1e-9));
    CHECK(std::abs(s.law.charfn(s.certificate.refined_location)) < 1e-10);
    const double d = levy_distance(s.law, mu).distance;
    CHECK(d < last);
    last = d;
  }
  const auto no_zero = Distribution::atom_plus(0.0, 0.5, Density(Uniform{-1.0, 1.0}));
  CHECK_THROWS_AS(nonqid_sequence(mu, no_zero, 2), InputError);
}
