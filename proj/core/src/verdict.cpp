#include "qid/verdict.hpp"

#include <algorithm>
#include <cmath>

#include "qid/error.hpp"

namespace qid {

namespace {

QidVerdict not_qid(const ZeroCertificate& cert) {
  QidVerdict v;
  v.qid = false;
  v.certificate = cert;
  return v;
}

double band_of(const KreinReport& k) { return k.z_max > 0.0 ? k.z_max : 64.0; }

QidVerdict krein_verdict(const Distribution& dist, const AnalysisOptions& opt) {
  QidVerdict v;
  v.certificate = find_zeros(dist, opt.scan);
  if (v.certificate.has_zero()) return v;
  v.qid = true;
  QidReport rep;
  rep.route = Route::krein;
  rep.krein = assemble_triplet(dist, opt.krein);
  rep.triplet = rep.krein.triplet;
  rep.recon_error = rep.krein.recon_error;
  v.report = std::move(rep);
  return v;
}

}  // namespace

std::string to_string(Route r) {
  switch (r) {
    case Route::krein: return "krein";
    case Route::lattice: return "lattice";
    case Route::normal_mixture: return "normal_mixture";
  }
  return "unknown";
}

double reconstruction_error(const QuasiLevyTriplet& tr, const Distribution& dist, double z_max, std::size_t n) {
  const double dz = 2.0 * z_max / static_cast<double>(n);
  const double z0 = (0.5 - 0.5 * static_cast<double>(n)) * dz;
  const auto recon = reconstruct_charfn(tr, z0, dz, n);
  const auto exact = dist.charfn_grid(z0, dz, n);
  double worst = 0.0;
  for (std::size_t j = 0; j < n; ++j) worst = std::max(worst, std::abs(recon[j] - exact[j]));
  return worst;
}

NormalFactorisation factor_normal_mixture(const Distribution& dist) {
  if (!dist.atoms().empty() || !dist.has_ac() || !dist.ac()->is_normal_mixture())
    throw InputError("normal factorisation needs an atomless normal mixture");
  const auto& parts = dist.ac()->parts();
  double a1 = std::numeric_limits<double>::infinity();
  for (const auto& p : parts) a1 = std::min(a1, std::get<Normal>(p.shape).variance);
  const double tie = 1e-12 * std::max(1.0, a1);
  // Reference component: heaviest among those of minimal variance.
  const WeightedComponent* ref = nullptr;
  for (const auto& p : parts) {
    if (std::get<Normal>(p.shape).variance - a1 > tie) continue;
    if (!ref || p.weight > ref->weight) ref = &p;
  }
  const double b1 = std::get<Normal>(ref->shape).mean;
  std::vector<Atom> atoms;
  std::vector<WeightedComponent> rest;
  double rest_weight = 0.0;
  for (const auto& p : parts) {
    const auto& nrm = std::get<Normal>(p.shape);
    if (nrm.variance - a1 <= tie) {
      atoms.push_back({nrm.mean - b1, p.weight});
    } else {
      rest.push_back({p.weight, Normal{nrm.mean - b1, nrm.variance - a1}});
      rest_weight += p.weight;
    }
  }
  std::optional<Density> ac;
  if (!rest.empty()) {
    for (auto& r : rest) r.weight /= rest_weight;
    // Absorb rounding so the weights sum to 1 exactly as checked.
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < rest.size(); ++i) s += rest[i].weight;
    rest.back().weight = 1.0 - s;
    ac = Density(std::move(rest));
  }
  double atom_sum = 0.0;
  for (const auto& a : atoms) atom_sum += a.p;
  return {b1, a1, Distribution(std::move(atoms), std::nullopt, ac ? 1.0 - atom_sum : 0.0, std::move(ac))};
}

QidVerdict mixed_qid_verdict(const Distribution& dist, const AnalysisOptions& opt) {
  const auto lat = infer_lattice(dist);
  if (!lat) throw InputError("atoms do not sit on a common lattice r + hZ");
  QidVerdict v;
  if (!dist.has_ac()) {
    ScanConfig period = opt.scan;
    period.z_scan_max = kTwoPi / lat->h;
    v.certificate = find_zeros(dist, period);
  } else {
    try {
      v.certificate = find_zeros(dist, opt.scan);
    } catch (const PeriodZeroError& e) {
      // The lattice factor vanishes; a zero of mu-hat itself still settles the question.
      ScanConfig bounded = opt.scan;
      bounded.z_scan_max = std::max(opt.scan.z_scan_min, 2.0 * kTwoPi / lat->h);
      const ZeroCertificate cert = find_zeros(dist, bounded);
      if (cert.has_zero()) return not_qid(cert);
      throw;
    }
  }
  if (v.certificate.has_zero()) return v;

  v.qid = true;
  QidReport rep;
  rep.route = Route::lattice;
  const MixedDecomposition dec = mixed_decompose(dist, lat);
  LatticeReport lr;
  lr.series = dec.lattice;
  lr.mass = dec.lattice_mass;
  lr.inverse = dec.inverse;
  lr.triplet = lattice_triplet(dec.lattice);
  lr.identity_error = dec.identity_error;
  rep.max_imag_b = lr.triplet.max_imag;

  rep.krein = assemble_triplet(dec.companion, opt.krein);
  rep.triplet = rep.krein.triplet;
  rep.triplet.drift = lat->r + lr.triplet.n * lat->h;
  rep.triplet.location_shift = lat->r;
  const auto& b = lr.triplet.b;
  for (std::size_t i = 0; i < b.coef.size(); ++i) {
    if (b.coef[i] == 0.0) continue;
    rep.triplet.lattice_atoms.push_back(
        {lat->h * static_cast<double>(b.k_min + static_cast<long long>(i)), b.coef[i].real()});
  }
  rep.lattice = std::move(lr);
  rep.recon_error = reconstruction_error(rep.triplet, dist, band_of(rep.krein), opt.krein.n_points);
  v.report = std::move(rep);
  return v;
}

QidVerdict qid_verdict(const Distribution& dist, const AnalysisOptions& opt) {
  const std::size_t atoms = dist.atoms().size();
  if (atoms == 1) return krein_verdict(dist, opt);
  if (atoms > 1) return mixed_qid_verdict(dist, opt);
  if (!dist.has_ac() || !dist.ac()->is_normal_mixture())
    throw InputError("law without atoms: only normal mixtures are supported");

  const NormalFactorisation fac = factor_normal_mixture(dist);
  QidVerdict v = qid_verdict(fac.cofactor, opt);
  if (!v.qid) return v;
  QidReport& rep = *v.report;
  rep.route = Route::normal_mixture;
  rep.triplet.gaussian_variance += fac.variance;
  rep.triplet.drift += fac.mean;
  rep.triplet.location_shift += fac.mean;
  rep.recon_error = reconstruction_error(rep.triplet, dist, band_of(rep.krein), opt.krein.n_points);
  return v;
}

}  // namespace qid
