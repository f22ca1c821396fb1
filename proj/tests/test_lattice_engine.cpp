#include <doctest.h>

#include <sstream>

#include "oracles.hpp"
#include "qid/error.hpp"
#include "qid/lattice.hpp"
#include "qid/verdict.hpp"

using namespace qid;

namespace {

LatticeSeries two_point(double p0, double p1, double r = 0.0, double h = 1.0) {
  LatticeSeries s;
  s.r = r;
  s.h = h;
  s.coef = {p0, p1};
  return s;
}

Distribution lattice_plus(double p0, double p1, double ac_weight, const Density& f) {
  return Distribution({{0.0, p0}, {1.0, p1}}, Lattice{0.0, 1.0}, ac_weight, f);
}

}  // namespace

TEST_CASE("lattice characteristic function") {
  LatticeSeries unit;
  unit.coef = {1.0};
  const std::vector<double> z{0.0, 1.0, oracle::pi};
  for (cplx v : lattice_charfn(unit, z)) CHECK(std::abs(v - 1.0) < 1e-15);
  CHECK(std::abs(lattice_charfn(two_point(0.7, 0.3), z)[2] - 0.4) < 1e-15);
  CHECK(std::abs(lattice_charfn(two_point(0.5, 0.5), z)[2]) < 1e-15);
}

TEST_CASE("Wiener inversion of the two-point lattice") {
  LatticeSeries unit;
  unit.coef = {1.0};
  CHECK(std::abs(wiener_invert(unit).c.at(0) - 1.0) < 1e-14);

  const auto inv = wiener_invert(two_point(0.7, 0.3));
  CHECK(inv.residual < 1e-8);
  CHECK(std::abs(inv.c.at(0) - oracle::c0) < 1e-10);
  CHECK(std::abs(inv.c.at(1) - oracle::c1) < 1e-10);
  for (long long k = 1; k < 12; ++k) CHECK(inv.c.at(k + 1).real() / inv.c.at(k).real() == doctest::Approx(-3.0 / 7.0).epsilon(1e-8));

  CHECK_THROWS_AS(wiener_invert(two_point(0.5, 0.5)), PeriodZeroError);
}

TEST_CASE("inverse of a shifted lattice sits at minus the offset") {
  const auto inv = wiener_invert(two_point(0.7, 0.3, 0.5, 2.0));
  CHECK(inv.c.r == doctest::Approx(-0.5));
  CHECK(inv.c.h == doctest::Approx(2.0));
  for (double z : {0.2, 1.1}) CHECK(std::abs(inv.c.eval(z) * two_point(0.7, 0.3, 0.5, 2.0).eval(z) - 1.0) < 1e-12);
}

TEST_CASE("lattice triplet against the log series") {
  LatticeSeries unit;
  unit.coef = {1.0};
  const auto t0 = lattice_triplet(unit);
  CHECK(t0.n == 0);
  CHECK(t0.b.l1_norm() < 1e-14);

  const auto t = lattice_triplet(two_point(0.7, 0.3));
  CHECK(t.n == 0);
  for (int k = 1; k <= 3; ++k) CHECK(std::abs(t.b.at(k).real() - oracle::b(k)) < 1e-10);
  CHECK(t.max_imag < 1e-10);
  CHECK(t.recon_error < 1e-8);

  const auto flipped = lattice_triplet(two_point(0.3, 0.7));
  CHECK(flipped.n == 1);
  for (int k = 1; k <= 3; ++k) CHECK(std::abs(flipped.b.at(-k).real() - oracle::b(k)) < 1e-10);

  CHECK_THROWS_AS(lattice_triplet(two_point(0.6, 0.3)), InputError);
}

TEST_CASE("companion of a single atom is the law itself") {
  const auto law = Distribution::atom_plus(0.0, 0.6, Density(Normal{0.5, 1.0}));
  const auto dec = mixed_decompose(law);
  CHECK(dec.lattice_mass == doctest::Approx(0.6));
  for (double z : {0.0, 0.7, 5.0, 30.0}) CHECK(std::abs(dec.companion.charfn(z) - law.charfn(z)) < 1e-12);
}

TEST_CASE("companion density of lattice plus Gaussian") {
  const auto law = lattice_plus(0.35, 0.15, 0.5, Density(Normal{}));
  const auto dec = mixed_decompose(law);
  CHECK(dec.identity_error < 1e-8);
  CHECK(dec.lattice_mass == doctest::Approx(0.5));
  for (double x : {-3.0, -1.0, 0.0, 0.4, 2.0, 5.0}) {
    double ref = 0.0;
    for (int k = 0; k < 80; ++k) ref += oracle::c0 * std::pow(-3.0 / 7.0, k) * 0.5 * normal_pdf(x - k);
    CHECK(dec.companion_density(x) == doctest::Approx(ref).epsilon(1e-8));
  }
}

TEST_CASE("balanced lattice cannot be decomposed") {
  CHECK_THROWS_AS(mixed_decompose(lattice_plus(0.25, 0.25, 0.5, Density(Normal{}))), PeriodZeroError);
}

TEST_CASE("mixed verdicts") {
  const Distribution pure({{0.0, 0.7}, {1.0, 0.3}}, Lattice{0.0, 1.0}, 0.0, std::nullopt);
  const auto a = mixed_qid_verdict(pure);
  REQUIRE(a.qid);
  REQUIRE(a.report->lattice);
  CHECK(std::abs(a.report->lattice->triplet.b.at(2).real() - oracle::b(2)) < 1e-10);

  const auto b = qid_verdict(lattice_plus(0.35, 0.15, 0.5, Density(Normal{})));
  REQUIRE(b.qid);
  CHECK(b.report->route == Route::lattice);
  CHECK(b.report->recon_error < 1e-4);
  CHECK(b.report->max_imag_b < 1e-10);

  // 0.24 + 0.08 cos z never vanishes, but the uniform part drags mu-hat through zero.
  const Distribution dip({{-1.0, 0.04}, {0.0, 0.16}, {1.0, 0.04}}, Lattice{-1.0, 1.0}, 0.76, Density(Uniform{-1.0, 1.0}));
  CHECK_FALSE(qid_verdict(dip).qid);

  const Distribution flat({{0.0, 0.5}, {1.0, 0.5}}, Lattice{0.0, 1.0}, 0.0, std::nullopt);
  const auto c = qid_verdict(flat);
  CHECK_FALSE(c.qid);
  CHECK(c.certificate.refined_location == doctest::Approx(oracle::pi).epsilon(1e-9));
}

TEST_CASE("series CSV") {
  std::ostringstream os;
  write_csv(os, two_point(0.7, 0.3));
  CHECK(os.str().rfind("k,re,im\n", 0) == 0);
}
