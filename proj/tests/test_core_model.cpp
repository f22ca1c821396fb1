#include <doctest.h>

#include <random>
#include <vector>

#include "oracles.hpp"
#include "qid/error.hpp"
#include "qid/model.hpp"
#include "qid/wiener.hpp"

using namespace qid;

namespace {

Distribution index_two_law() { return Distribution::atom_plus(0.0, 0.001, Density(Normal{1.0, 1.0})); }

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> x(n);
  for (std::size_t k = 0; k < n; ++k) x[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1);
  return x;
}

}  // namespace

TEST_CASE("construction accepts valid laws") {
  CHECK_NOTHROW(index_two_law());
  const auto d = Distribution::dirac();
  CHECK(d.atoms().size() == 1);
  CHECK_FALSE(d.has_ac());
  CHECK(d.atom_mass() == doctest::Approx(1.0));
}

TEST_CASE("mass must sum to one") {
  CHECK_THROWS_AS(Distribution({{0.0, 0.6}}, std::nullopt, 0.5, Density(Normal{})), InputError);
  CHECK_THROWS_AS(Distribution({{0.0, 0.4}}, std::nullopt, 0.5, Density(Normal{})), InputError);
}

TEST_CASE("parameter ranges are enforced") {
  CHECK_THROWS_AS(Density(Normal{0.0, 0.0}), InputError);
  CHECK_THROWS_AS(Density(Exponential{-1.0, 0.0}), InputError);
  CHECK_THROWS_AS(Density(Uniform{1.0, 1.0}), InputError);
  CHECK_THROWS_AS(Density(Tabulated(0.0, 0.1, {0.0, -1.0, 0.0})), InputError);
  CHECK_THROWS_AS(Distribution({{0.0, 0.5}, {0.25, 0.5}}, Lattice{0.0, 1.0}, 0.0, std::nullopt), InputError);
}

TEST_CASE("cdf_grid on simple laws") {
  const std::vector<double> x{-1.0, 0.0, 1.0};
  const auto f = cdf_grid(Distribution::dirac(), x);
  CHECK(f[0] == doctest::Approx(0.0));
  CHECK(f[1] == doctest::Approx(1.0));
  CHECK(f[2] == doctest::Approx(1.0));

  const auto u = Distribution::continuous(Density(Uniform{-1.0, 1.0}));
  const std::vector<double> xu{-1.5, 0.0, 1.5};
  CHECK(cdf_grid(u, xu)[1] == doctest::Approx(0.5).epsilon(1e-12));

  const auto half = Distribution::atom_plus(0.0, 0.5, Density(Normal{}));
  const auto g = linspace(-10.0, 10.0, 2001);
  CHECK(cdf_grid(half, g)[1000] == doctest::Approx(oracle::half_atom_half_normal_cdf_at_0).epsilon(1e-12));
}

TEST_CASE("cdf_grid rejects a grid missing the mass") {
  const auto x = linspace(-1.0, 1.0, 101);
  CHECK_THROWS_AS(cdf_grid(Distribution::continuous(Density(Normal{})), x), InputError);
}

TEST_CASE("property: distribution functions are monotone and bounded") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const auto x = linspace(-40.0, 40.0, 4001);
  for (int trial = 0; trial < 20; ++trial) {
    const double p = 0.05 + 0.9 * U(rng);
    Density d({{0.5, Normal{4.0 * U(rng) - 2.0, 0.2 + U(rng)}},
               {0.3, Exponential{0.5 + U(rng), -U(rng)}},
               {0.2, Uniform{-1.0 - U(rng), U(rng)}}});
    const auto law = Distribution::atom_plus(2.0 * U(rng) - 1.0, p, d);
    const auto f = cdf_grid(law, x);
    for (std::size_t k = 0; k < f.size(); ++k) {
      CHECK(f[k] >= 0.0);
      CHECK(f[k] <= 1.0 + 1e-12);
      if (k > 0) CHECK(f[k] >= f[k - 1] - 1e-15);
    }
  }
}

TEST_CASE("characteristic function invariants") {
  const auto law = index_two_law();
  CHECK(std::abs(law.charfn(0.0) - 1.0) < 1e-12);
  CHECK(law.charfn(oracle::pi).real() == doctest::Approx(oracle::index_two_charfn_at_pi).epsilon(1e-10));
  for (double z : {0.3, 1.7, 12.0, 250.0}) {
    CHECK(std::abs(law.charfn(-z) - std::conj(law.charfn(z))) < 1e-14);
    CHECK(std::abs(law.charfn(z)) <= 1.0 + 1e-12);
  }
}

TEST_CASE("piecewise-linear transform is exact for the triangle") {
  Density tri(Tabulated(-1.0, 1.0, {0.0, 1.0, 0.0}));
  for (double z : {0.5, 2.0, 9.0}) {
    const double exact = 2.0 * (1.0 - std::cos(z)) / (z * z);
    CHECK(std::abs(tri.transform(z) - cplx(exact, 0.0)) < 1e-12);
  }
  CHECK(tri.total_variation() == doctest::Approx(2.0));
}

TEST_CASE("wiener norm of an atom plus a density") {
  WienerElement e;
  e.p = 0.001;
  e.dx = 1e-3;
  e.x0 = -9.0;
  for (int k = 0; k <= 20000; ++k) e.f.emplace_back(0.999 * normal_pdf(e.x0 + e.dx * k - 1.0));
  CHECK(wiener_norm(e) == doctest::Approx(1.0).epsilon(1e-9));

  WienerElement atom = wiener_unit();
  atom.p = -0.5;
  CHECK(wiener_norm(atom) == doctest::Approx(0.5));
}

TEST_CASE("wiener product transforms multiply and the norm is submultiplicative") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> N;
  for (int trial = 0; trial < 10; ++trial) {
    WienerElement a, b;
    a.dx = b.dx = 0.05;
    a.x0 = -1.0;
    b.x0 = 0.5;
    a.p = cplx(N(rng), N(rng));
    b.p = cplx(N(rng), N(rng));
    for (int k = 0; k < 40; ++k) a.f.emplace_back(N(rng), N(rng));
    for (int k = 0; k < 25; ++k) b.f.emplace_back(N(rng), N(rng));
    const auto ab = product(a, b);
    CHECK(wiener_norm(ab) <= wiener_norm(a) * wiener_norm(b) * (1.0 + 1e-12));
    for (double z : {0.0, 0.7, -3.1}) CHECK(std::abs(ab.eval(z) - a.eval(z) * b.eval(z)) < 1e-10);
  }
}

TEST_CASE("wiener unit is neutral") {
  WienerElement a;
  a.p = 0.3;
  a.dx = 0.1;
  a.f = {cplx(1.0), cplx(2.0, -1.0)};
  const auto b = product(wiener_unit(0.1), a);
  CHECK(std::abs(b.p - a.p) < 1e-15);
  CHECK(std::abs(wiener_norm(b) - wiener_norm(a)) < 1e-12);
}
