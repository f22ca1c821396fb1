#include "qid/spec_io.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "qid/error.hpp"

namespace qid {

namespace {

using nlohmann::json;

void expect_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw InputError(where + ": expected an object");
  for (const auto& [key, _] : j.items())
    if (!allowed.contains(key)) throw InputError(where + ": unknown field \"" + key + "\"");
}

double number(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) throw InputError(where + ": missing \"" + key + "\"");
  const json& v = j.at(key);
  if (!v.is_number()) throw InputError(where + ": \"" + key + "\" must be a number");
  return v.get<double>();
}

double number_or(const json& j, const std::string& key, double fallback, const std::string& where) {
  return j.contains(key) ? number(j, key, where) : fallback;
}

Component component(const json& j, const std::filesystem::path& base, const std::string& where,
                    const std::set<std::string>& extra) {
  if (!j.contains("kind") || !j.at("kind").is_string()) throw InputError(where + ": missing \"kind\"");
  const std::string kind = j.at("kind").get<std::string>();
  auto keys = [&extra](std::set<std::string> k) {
    k.insert(extra.begin(), extra.end());
    k.insert("kind");
    return k;
  };
  if (kind == "normal") {
    expect_keys(j, keys({"mean", "variance"}), where);
    return Normal{number(j, "mean", where), number(j, "variance", where)};
  }
  if (kind == "exponential") {
    expect_keys(j, keys({"rate", "loc"}), where);
    return Exponential{number(j, "rate", where), number_or(j, "loc", 0.0, where)};
  }
  if (kind == "uniform") {
    expect_keys(j, keys({"left", "right"}), where);
    return Uniform{number(j, "left", where), number(j, "right", where)};
  }
  if (kind == "tabulated") {
    expect_keys(j, keys({"file"}), where);
    if (!j.contains("file") || !j.at("file").is_string()) throw InputError(where + ": tabulated needs \"file\"");
    return load_tabulated_csv(base / j.at("file").get<std::string>());
  }
  throw InputError(where + ": unknown kind \"" + kind + "\"");
}

}  // namespace

Tabulated load_tabulated_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open tabulated density " + path.string());
  std::string line;
  std::getline(in, line);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "x,density") throw InputError(path.string() + ": header must be \"x,density\"");
  std::vector<double> xs, ys;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    std::istringstream row(line);
    double x = 0.0, y = 0.0;
    char comma = 0;
    if (!(row >> x >> comma >> y) || comma != ',') throw InputError(path.string() + ": malformed row \"" + line + "\"");
    xs.push_back(x);
    ys.push_back(y);
  }
  if (xs.size() < 2) throw InputError(path.string() + ": need at least two rows");
  const double dx = (xs.back() - xs.front()) / static_cast<double>(xs.size() - 1);
  if (!(dx > 0.0)) throw InputError(path.string() + ": x must be strictly increasing");
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const double expected = xs.front() + dx * static_cast<double>(k);
    if (std::abs(xs[k] - expected) > 1e-9 * std::max(1.0, std::abs(expected)))
      throw InputError(path.string() + ": x spacing is not uniform");
  }
  return Tabulated(xs.front(), dx, std::move(ys));
}

Distribution parse_distribution(std::string_view json_text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("spec is not valid JSON: ") + e.what());
  }
  expect_keys(doc, {"atoms", "lattice", "ac"}, "spec");

  std::vector<Atom> atoms;
  if (doc.contains("atoms")) {
    if (!doc.at("atoms").is_array()) throw InputError("spec: \"atoms\" must be an array");
    for (const auto& a : doc.at("atoms")) {
      expect_keys(a, {"x", "p"}, "atom");
      atoms.push_back({number(a, "x", "atom"), number(a, "p", "atom")});
    }
  }
  std::optional<Lattice> lattice;
  if (doc.contains("lattice")) {
    const json& l = doc.at("lattice");
    expect_keys(l, {"r", "h"}, "lattice");
    lattice = Lattice{number(l, "r", "lattice"), number(l, "h", "lattice")};
  }
  double weight = 0.0;
  std::optional<Density> ac;
  if (doc.contains("ac")) {
    const json& a = doc.at("ac");
    if (!a.is_object()) throw InputError("ac: expected an object");
    weight = number(a, "weight", "ac");
    if (a.contains("kind") && a.at("kind") == "mixture") {
      expect_keys(a, {"weight", "kind", "components"}, "ac");
      if (!a.contains("components") || !a.at("components").is_array())
        throw InputError("ac: mixture needs a \"components\" array");
      std::vector<WeightedComponent> parts;
      for (const auto& c : a.at("components"))
        parts.push_back({number(c, "weight", "component"), component(c, base_dir, "component", {"weight"})});
      ac = Density(std::move(parts));
    } else {
      ac = Density(component(a, base_dir, "ac", {"weight"}));
    }
  }
  return Distribution(std::move(atoms), lattice, weight, std::move(ac));
}

Distribution load_distribution(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open spec " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_distribution(buf.str(), path.parent_path());
}

ScanConfig parse_scan_config(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("scan config is not valid JSON: ") + e.what());
  }
  expect_keys(doc, {"z_scan_min", "refine_tol"}, "scan config");
  ScanConfig cfg;
  cfg.z_scan_min = number_or(doc, "z_scan_min", cfg.z_scan_min, "scan config");
  cfg.refine_tol = number_or(doc, "refine_tol", cfg.refine_tol, "scan config");
  if (!(cfg.z_scan_min > 0.0) || !(cfg.refine_tol > 0.0)) throw InputError("scan config: values must be > 0");
  return cfg;
}

}  // namespace qid
