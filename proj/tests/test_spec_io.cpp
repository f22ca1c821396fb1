#include <doctest.h>

#include "qid/error.hpp"
#include "qid/spec_io.hpp"

using namespace qid;

namespace {
const std::filesystem::path data = QID_TEST_DATA;
}

TEST_CASE("corpus specs load") {
  const auto law2 = load_distribution(data / "index_two.json");
  CHECK(law2.atom_mass() == doctest::Approx(0.001));
  CHECK(law2.ac_weight() == doctest::Approx(0.999));
  const auto lat = load_distribution(data / "lattice_73.json");
  REQUIRE(lat.lattice());
  CHECK(lat.lattice()->h == 1.0);
  CHECK(load_distribution(data / "normal_mixture.json").ac()->is_normal_mixture());
}

TEST_CASE("tabulated densities resolve against the spec directory") {
  const auto law = load_distribution(data / "tabulated_atom.json");
  REQUIRE(law.has_ac());
  CHECK(law.ac()->has_tabulated());
  const auto tab = load_tabulated_csv(data / "triangle.csv");
  CHECK(tab.size() == 2001);
  CHECK(tab.integral() == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("schema and invariant violations are input errors") {
  CHECK_THROWS_AS(load_distribution(data / "malformed.json"), InputError);
  CHECK_THROWS_AS(load_distribution(data / "bad_mass.json"), InputError);
  CHECK_THROWS_AS(load_distribution(data / "missing.json"), InputError);
  CHECK_THROWS_AS(parse_distribution(R"({"atoms": [{"x": 0, "p": 1}], "extra": 1})"), InputError);
  CHECK_THROWS_AS(parse_distribution(R"({"ac": {"weight": 1, "mean": 0}})"), InputError);
  CHECK_THROWS_AS(parse_distribution(R"({"ac": {"weight": 1, "kind": "cauchy"}})"), InputError);
  CHECK_THROWS_AS(parse_distribution(R"({"atoms": [{"x": "a", "p": 1}]})"), InputError);
  CHECK_THROWS_AS(parse_distribution(R"({"atoms": [{"x": 0, "p": 1}], "ac": {"weight": 0.5, "kind": "tabulated", "file": "nope.csv"}})", data),
                  InputError);
}

TEST_CASE("scan config") {
  const auto cfg = parse_scan_config(R"({"z_scan_min": 128})");
  CHECK(cfg.z_scan_min == 128.0);
  CHECK(cfg.refine_tol == 1e-12);
  CHECK_THROWS_AS(parse_scan_config(R"({"z_scan_min": -1})"), InputError);
  CHECK_THROWS_AS(parse_scan_config(R"({"zscan": 1})"), InputError);
}
