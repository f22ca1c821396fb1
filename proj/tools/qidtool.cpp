// Command-line front end for the qidkit library.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "qid/charfn.hpp"
#include "qid/constructions.hpp"
#include "qid/error.hpp"
#include "qid/krein.hpp"
#include "qid/lattice.hpp"
#include "qid/report.hpp"
#include "qid/spec_io.hpp"
#include "qid/verdict.hpp"
#include "qid/winding.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using qid::format_number;

namespace {

enum Exit { kQid = 0, kInput = 1, kIndeterminate = 2, kNotQid = 3 };

struct RunConfig {
  std::string command;
  std::string spec;
  std::string spec2;
  std::string out = ".";
  std::optional<double> z_max;
  std::optional<std::size_t> n_points;
  std::string t_grid = "0:1:0.1";
  std::string n_ladder = "1,2,5,10,50";
  bool json_only = false;
};

constexpr std::size_t kCsvPoints = 4096;

double json_number(double v) { return std::isfinite(v) ? v : 0.0; }

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw qid::InputError("cannot write " + path.string());
  out << text;
}

void write_json(const fs::path& path, const json& doc) { write_text(path, doc.dump(2) + "\n"); }

qid::Distribution load(const std::string& path, const char* flag) {
  if (path.empty()) throw qid::InputError(std::string("missing ") + flag);
  return qid::load_distribution(path);
}

qid::AnalysisOptions options(const RunConfig& cfg) {
  qid::AnalysisOptions opt;
  if (cfg.n_points) {
    const std::size_t n = *cfg.n_points;
    if (n < (std::size_t{1} << 10) || n > (std::size_t{1} << 20) || !qid::is_power_of_two(n))
      throw qid::InputError("--n must be a power of two in [2^10, 2^20]");
    opt.krein.n_points = n;
  }
  if (cfg.z_max) {
    if (!(*cfg.z_max > 0.0)) throw qid::InputError("--zmax must be > 0");
    opt.krein.z_max = cfg.z_max;
  }
  return opt;
}

json certificate_json(const qid::ZeroCertificate& c) {
  json j;
  j["verdict"] = c.has_zero() ? "zero_found" : "no_zeros";
  if (c.has_zero()) {
    j["z_lo"] = c.z_lo;
    j["z_hi"] = c.z_hi;
    j["refined_location"] = c.refined_location;
    j["refined_modulus"] = c.refined_modulus;
  } else {
    j["z_max_used"] = c.z_max_used;
    j["tail_bound_used"] = c.tail_bound_used;
    j["min_modulus_observed"] = c.min_modulus_observed;
  }
  return j;
}

json triplet_json(const qid::QidReport& r) {
  const auto& t = r.triplet;
  json j;
  j["a"] = t.gaussian_variance;
  j["gamma0"] = t.drift;
  j["index"] = t.index;
  j["x0"] = t.location_shift;
  j["im_residual"] = r.krein.im_residual;
  j["recon_error"] = r.recon_error;
  j["finite_variation"] = t.finite_variation();
  j["singular_rate"] = t.singular_rate;
  j["origin_jump"] = t.origin_jump;
  j["origin_kink"] = t.origin_kink;
  j["origin_rate"] = t.origin_rate;
  j["truncated_variation"] = json_number(t.truncated_variation());
  j["lattice_atoms"] = t.lattice_atoms.size();
  return j;
}

json krein_json(const qid::KreinReport& k) {
  json j;
  j["z_max"] = k.z_max;
  j["n_points"] = k.n_points;
  j["dx"] = k.dx;
  j["x_window"] = k.x_window;
  j["q_est"] = {k.q_est.real(), k.q_est.imag()};
  j["tail_residual"] = k.tail_residual;
  j["truncated_mass"] = k.truncated_mass;
  j["winding_raw"] = k.winding.raw;
  j["z_winding"] = k.z_winding;
  j["n_winding"] = k.n_winding;
  return j;
}

json lattice_json(const qid::LatticeReport& l) {
  json j;
  j["r"] = l.series.r;
  j["h"] = l.series.h;
  j["mass"] = l.mass;
  j["l1_norm"] = l.series.l1_norm();
  j["truncation_tol"] = l.inverse.truncation_tol;
  j["inverse_l1_norm"] = l.inverse.c.l1_norm();
  j["inverse_residual"] = l.inverse.residual;
  j["n_fft"] = l.inverse.n_fft;
  j["drift_n"] = l.triplet.n;
  j["b_max_imag"] = l.triplet.max_imag;
  j["b_recon_error"] = l.triplet.recon_error;
  j["identity_error"] = l.identity_error;
  return j;
}

json tolerances_json(const qid::AnalysisOptions& opt) {
  json j;
  j["zero_threshold"] = qid::kZeroThreshold;
  j["indeterminate_ceiling"] = qid::kIndeterminateCeiling;
  j["z_scan_min"] = opt.scan.z_scan_min;
  j["refine_tol"] = opt.scan.refine_tol;
  j["band_tol"] = opt.krein.band_tol;
  j["z_cap"] = opt.krein.z_cap;
  j["n_points"] = opt.krein.n_points;
  return j;
}

std::string density_csv(const qid::QuasiLevyTriplet& t) {
  std::ostringstream os;
  os << "x,g\n";
  const auto& d = t.density;
  for (std::size_t k = 0; k < d.size(); ++k)
    os << format_number(d.x(k)) << ',' << format_number(t.regular_density(d.x(k))) << '\n';
  return os.str();
}

std::string atoms_csv(const qid::QuasiLevyTriplet& t) {
  std::ostringstream os;
  os << "k,b_k\n";
  for (const auto& b : t.lattice_atoms) os << format_number(b.location) << ',' << format_number(b.weight) << '\n';
  return os.str();
}

std::string series_csv(const qid::LatticeSeries& s) {
  std::ostringstream os;
  qid::write_csv(os, s);
  return os.str();
}

double csv_band(const qid::QidVerdict& v) {
  if (v.report && v.report->krein.z_max > 0.0) return v.report->krein.z_max;
  if (v.certificate.has_zero()) return std::max(64.0, 1.25 * v.certificate.refined_location);
  return 64.0;
}

void write_grids(const fs::path& dir, const qid::Distribution& dist, const qid::QidVerdict& v) {
  const double z_max = csv_band(v);
  const auto grid = qid::charfn_eval(dist, z_max, kCsvPoints);
  std::ostringstream cf;
  cf << "z,re,im\n";
  for (std::size_t j = 0; j < grid.size(); ++j)
    cf << format_number(grid.z(j)) << ',' << format_number(grid.values[j].real()) << ','
       << format_number(grid.values[j].imag()) << '\n';
  write_text(dir / "charfn.csv", cf.str());
  if (!v.report) return;
  const auto recon = qid::reconstruct_charfn(v.report->triplet, -z_max, grid.spacing(), grid.size());
  std::ostringstream rc;
  rc << "z,re,im,abs_error\n";
  for (std::size_t j = 0; j < grid.size(); ++j)
    rc << format_number(grid.z(j)) << ',' << format_number(recon[j].real()) << ',' << format_number(recon[j].imag())
       << ',' << format_number(std::abs(recon[j] - grid.values[j])) << '\n';
  write_text(dir / "recon.csv", rc.str());
  write_text(dir / "g.csv", density_csv(v.report->triplet));
  if (!v.report->triplet.lattice_atoms.empty()) write_text(dir / "b.csv", atoms_csv(v.report->triplet));
}

json verdict_json(const std::string& command, const qid::QidVerdict& v, const qid::AnalysisOptions& opt) {
  json doc;
  doc["command"] = command;
  doc["verdict"] = v.qid ? "QID" : "NotQID";
  doc["certificate"] = certificate_json(v.certificate);
  if (v.report) {
    doc["route"] = qid::to_string(v.report->route);
    doc["triplet"] = triplet_json(*v.report);
    doc["krein"] = krein_json(v.report->krein);
    if (v.report->lattice) doc["lattice"] = lattice_json(*v.report->lattice);
  }
  doc["tolerances"] = tolerances_json(opt);
  return doc;
}

int cmd_analyze(const RunConfig& cfg) {
  const auto dist = load(cfg.spec, "--spec");
  const auto opt = options(cfg);
  const auto v = qid::qid_verdict(dist, opt);
  const fs::path dir(cfg.out);
  write_json(dir / "report.json", verdict_json("analyze", v, opt));
  if (!cfg.json_only) write_grids(dir, dist, v);
  if (v.qid) std::cout << "QID index " << v.report->triplet.index << '\n';
  else std::cout << "NotQID zero at " << format_number(v.certificate.refined_location) << '\n';
  return v.qid ? kQid : kNotQid;
}

int cmd_zeros(const RunConfig& cfg) {
  const auto dist = load(cfg.spec, "--spec");
  qid::ScanConfig scan;
  if (cfg.z_max) scan.z_scan_max = cfg.z_max;
  const auto cert = qid::find_zeros(dist, scan);
  json doc;
  doc["command"] = "zeros";
  doc["certificate"] = certificate_json(cert);
  write_json(fs::path(cfg.out) / "zeros.json", doc);
  std::cout << (cert.has_zero() ? "zero_found" : "no_zeros") << '\n';
  return cert.has_zero() ? kNotQid : kQid;
}

int cmd_index(const RunConfig& cfg) {
  const auto dist = load(cfg.spec, "--spec");
  const auto f = qid::atomic_transform(dist);
  const double z_max = cfg.z_max.value_or(std::max(64.0, 1.25 * f.ac_tv / f.atom_mass));
  std::size_t n = cfg.n_points.value_or(0);
  if (n == 0) {
    const double spacing = qid::kPi / (8.0 * f.x_spread);
    n = std::clamp(std::size_t{1} << static_cast<int>(std::ceil(std::log2(2.0 * z_max / spacing))),
                   std::size_t{1} << 10, std::size_t{1} << 20);
  }
  const auto grid = qid::charfn_eval(dist, z_max, n);
  const auto w = qid::winding_index(grid, dist);
  json doc;
  doc["command"] = "index";
  doc["index"] = w.index;
  doc["raw"] = w.raw;
  doc["z_max"] = z_max;
  doc["n_points"] = n;
  write_json(fs::path(cfg.out) / "index.json", doc);
  if (!cfg.json_only) {
    const double x0 = dist.atoms().front().x;
    auto centred = [&dist, x0](double z) { return dist.charfn(z) * std::polar(1.0, -x0 * z); };
    qid::CharFunctionGrid c = grid;
    for (std::size_t j = 0; j < c.size(); ++j) c.values[j] = centred(c.z(j));
    std::ostringstream os;
    qid::write_csv(os, qid::distinguished_log(c, centred));
    write_text(fs::path(cfg.out) / "log.csv", os.str());
  }
  std::cout << "index " << w.index << '\n';
  return kQid;
}

int cmd_triplet(const RunConfig& cfg) {
  const auto dist = load(cfg.spec, "--spec");
  const auto opt = options(cfg);
  const auto v = qid::qid_verdict(dist, opt);
  const fs::path dir(cfg.out);
  write_json(dir / "triplet.json", verdict_json("triplet", v, opt));
  if (v.report && !cfg.json_only) {
    write_text(dir / "g.csv", density_csv(v.report->triplet));
    if (!v.report->triplet.lattice_atoms.empty()) write_text(dir / "b.csv", atoms_csv(v.report->triplet));
  }
  return v.qid ? kQid : kNotQid;
}

int cmd_reconstruct(const RunConfig& cfg) {
  const auto dist = load(cfg.spec, "--spec");
  auto opt = options(cfg);
  const auto v = qid::qid_verdict(dist, opt);
  if (!v.qid) {
    write_json(fs::path(cfg.out) / "reconstruct.json", verdict_json("reconstruct", v, opt));
    return kNotQid;
  }
  const double z_max = cfg.z_max.value_or(csv_band(v));
  const std::size_t n = cfg.n_points.value_or(kCsvPoints);
  const auto grid = qid::charfn_eval(dist, z_max, n);
  const auto recon = qid::reconstruct_charfn(v.report->triplet, -z_max, grid.spacing(), n);
  double err = 0.0;
  std::ostringstream rc;
  rc << "z,re,im,abs_error\n";
  for (std::size_t j = 0; j < n; ++j) {
    const double e = std::abs(recon[j] - grid.values[j]);
    err = std::max(err, e);
    rc << format_number(grid.z(j)) << ',' << format_number(recon[j].real()) << ',' << format_number(recon[j].imag())
       << ',' << format_number(e) << '\n';
  }
  json doc = verdict_json("reconstruct", v, opt);
  doc["grid"] = {{"z_max", z_max}, {"n_points", n}, {"sup_error", err}};
  write_json(fs::path(cfg.out) / "reconstruct.json", doc);
  if (!cfg.json_only) write_text(fs::path(cfg.out) / "recon.csv", rc.str());
  return kQid;
}

int cmd_lattice(const RunConfig& cfg) {
  const auto dist = load(cfg.spec, "--spec");
  if (dist.atoms().size() < 2 && !dist.lattice()) throw qid::InputError("lattice: spec has no lattice part");
  const auto opt = options(cfg);
  const auto v = qid::mixed_qid_verdict(dist, opt);
  const fs::path dir(cfg.out);
  write_json(dir / "lattice.json", verdict_json("lattice", v, opt));
  if (v.report && !cfg.json_only) {
    const auto& l = *v.report->lattice;
    write_text(dir / "lattice_p.csv", series_csv(l.series));
    write_text(dir / "lattice_c.csv", series_csv(l.inverse.c));
    std::ostringstream b;
    b << "k,b_k\n";
    for (std::size_t i = 0; i < l.triplet.b.coef.size(); ++i)
      b << (l.triplet.b.k_min + static_cast<long long>(i)) << ',' << format_number(l.triplet.b.coef[i].real()) << '\n';
    write_text(dir / "lattice_b.csv", b.str());
    if (dist.has_ac()) {
      const auto dec = qid::mixed_decompose(dist, qid::infer_lattice(dist));
      const auto s = dist.ac()->essential_support();
      std::ostringstream c;
      c << "x,density\n";
      const double lo = s.lo + dec.inverse.c.r + dec.inverse.c.h * static_cast<double>(dec.inverse.c.k_min);
      const double hi = s.hi + dec.inverse.c.r + dec.inverse.c.h * static_cast<double>(dec.inverse.c.k_max());
      for (std::size_t k = 0; k < kCsvPoints; ++k) {
        const double x = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(kCsvPoints - 1);
        c << format_number(x) << ',' << format_number(dec.companion_density(x)) << '\n';
      }
      write_text(dir / "companion.csv", c.str());
    }
  }
  if (v.qid) std::cout << "QID drift n " << v.report->lattice->triplet.n << '\n';
  else std::cout << "NotQID zero at " << format_number(v.certificate.refined_location) << '\n';
  return v.qid ? kQid : kNotQid;
}

std::vector<double> parse_t_grid(const std::string& text) {
  double a = 0.0, b = 0.0, step = 0.0;
  char c1 = 0, c2 = 0;
  std::istringstream in(text);
  if (!(in >> a >> c1 >> b >> c2 >> step) || c1 != ':' || c2 != ':' || !(step > 0.0) || b < a)
    throw qid::InputError("--t-grid must look like a:b:step with step > 0");
  std::vector<double> t;
  const auto count = static_cast<long long>(std::floor((b - a) / step + 1e-9));
  for (long long k = 0; k <= count; ++k) {
    // Snap away representation noise such as 0.30000000000000004.
    const double v = std::round((a + step * static_cast<double>(k)) * 1e12) / 1e12;
    t.push_back(std::min(b, v));
  }
  for (double v : t)
    if (v < 0.0 || v > 1.0) throw qid::InputError("--t-grid values must lie in [0, 1]");
  return t;
}

std::vector<std::size_t> parse_ladder(const std::string& text) {
  std::vector<std::size_t> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      const long long v = std::stoll(item);
      if (v < 1) throw qid::InputError("--n-ladder entries must be >= 1");
      out.push_back(static_cast<std::size_t>(v));
    } catch (const std::logic_error&) {
      throw qid::InputError("--n-ladder must be a comma-separated list of integers");
    }
  }
  if (out.empty()) throw qid::InputError("--n-ladder is empty");
  return out;
}

int cmd_interpolate(const RunConfig& cfg) {
  const auto mu1 = load(cfg.spec, "--spec");
  const auto mu2 = load(cfg.spec2, "--spec2");
  const auto ts = parse_t_grid(cfg.t_grid);
  const auto opt = options(cfg);
  std::ostringstream csv;
  csv << "t,levy_to_mu1,levy_to_mu2,qid_verdict\n";
  json rows = json::array();
  double spacing = 0.0;
  for (double t : ts) {
    const auto mt = qid::interpolate(mu1, mu2, t);
    const auto d1 = qid::levy_distance(mt, mu1);
    const auto d2 = qid::levy_distance(mt, mu2);
    spacing = d1.grid_spacing;
    std::string verdict;
    try {
      verdict = qid::qid_verdict(mt, opt).qid ? "QID" : "NotQID";
    } catch (const qid::IndeterminateError&) {
      verdict = "indeterminate";
    } catch (const qid::InputError&) {
      verdict = "unsupported";
    }
    csv << format_number(t) << ',' << format_number(d1.distance) << ',' << format_number(d2.distance) << ','
        << verdict << '\n';
    rows.push_back({{"t", t}, {"levy_to_mu1", d1.distance}, {"levy_to_mu2", d2.distance}, {"qid_verdict", verdict}});
  }
  json doc;
  doc["command"] = "interpolate";
  doc["metric"] = "levy";
  doc["grid_spacing"] = spacing;
  doc["rows"] = rows;
  write_json(fs::path(cfg.out) / "path.json", doc);
  if (!cfg.json_only) write_text(fs::path(cfg.out) / "path.csv", csv.str());
  return kQid;
}

int cmd_sequence(const RunConfig& cfg) {
  const auto mu = load(cfg.spec, "--spec");
  const auto nu = load(cfg.spec2, "--spec2");
  const auto ladder = parse_ladder(cfg.n_ladder);
  std::ostringstream csv;
  csv << "n,zero_location,levy_to_limit\n";
  json rows = json::array();
  double spacing = 0.0;
  for (std::size_t n : ladder) {
    const auto member = qid::nonqid_sequence(mu, nu, n, cfg.z_max.value_or(64.0));
    const auto d = qid::levy_distance(member.law, mu);
    spacing = d.grid_spacing;
    csv << n << ',' << format_number(member.certificate.refined_location) << ',' << format_number(d.distance) << '\n';
    rows.push_back({{"n", n},
                    {"zero_location", member.certificate.refined_location},
                    {"levy_to_limit", d.distance},
                    {"verdict", "NotQID"},
                    {"certificate", certificate_json(member.certificate)}});
  }
  json doc;
  doc["command"] = "sequence";
  doc["metric"] = "levy";
  doc["grid_spacing"] = spacing;
  doc["rows"] = rows;
  write_json(fs::path(cfg.out) / "sequence.json", doc);
  if (!cfg.json_only) write_text(fs::path(cfg.out) / "sequence.csv", csv.str());
  return kQid;
}

int dispatch(const RunConfig& cfg) {
  fs::create_directories(cfg.out);
  if (cfg.command == "analyze") return cmd_analyze(cfg);
  if (cfg.command == "zeros") return cmd_zeros(cfg);
  if (cfg.command == "index") return cmd_index(cfg);
  if (cfg.command == "triplet") return cmd_triplet(cfg);
  if (cfg.command == "reconstruct") return cmd_reconstruct(cfg);
  if (cfg.command == "lattice") return cmd_lattice(cfg);
  if (cfg.command == "interpolate") return cmd_interpolate(cfg);
  if (cfg.command == "sequence") return cmd_sequence(cfg);
  throw qid::InputError("unknown command " + cfg.command);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quasi-infinite divisibility toolkit"};
  app.require_subcommand(1);
  RunConfig cfg;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"analyze", "Verdict, triplet and reconstruction for one law"},
      {"zeros", "Zero scan of the characteristic function"},
      {"index", "Winding index of the characteristic function"},
      {"triplet", "Characteristic triplet only"},
      {"reconstruct", "Characteristic function rebuilt from the triplet"},
      {"lattice", "Lattice decomposition, inverse series and lattice triplet"},
      {"interpolate", "Path between two laws with distances and verdicts"},
      {"sequence", "Non-QID sequence converging to a law"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--spec", cfg.spec, "Distribution spec (JSON)");
    sub->add_option("--spec2", cfg.spec2, "Second distribution spec");
    sub->add_option("--out", cfg.out, "Output directory");
    sub->add_option("--zmax", cfg.z_max, "Transform band / scan bound");
    sub->add_option("--n", cfg.n_points, "Grid points (power of two in [2^10, 2^20])");
    sub->add_option("--t-grid", cfg.t_grid, "Interpolation grid a:b:step");
    sub->add_option("--n-ladder", cfg.n_ladder, "Sequence indices, comma separated");
    sub->add_flag("--json-only", cfg.json_only, "Skip CSV outputs");
    sub->callback([&cfg, name = name] { cfg.command = name; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kInput;
  }
  try {
    return dispatch(cfg);
  } catch (const qid::InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kInput;
  } catch (const qid::IndeterminateError& e) {
    std::cerr << "indeterminate: " << e.what() << '\n';
    return kIndeterminate;
  } catch (const qid::PeriodZeroError& e) {
    std::cerr << "indeterminate: " << e.what() << '\n';
    return kIndeterminate;
  } catch (const qid::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kIndeterminate;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInput;
  }
}
