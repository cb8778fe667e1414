#pragma once

#include <cmath>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "coalesce/cli/schema.hpp"
#include "coalesce/dynamics.hpp"
#include "coalesce/models.hpp"
#include "coalesce/spectra.hpp"

namespace coalesce::cli {

using numkit::cplx;

struct SpectrumJob {
  spectra::Tolerances tol;
  bool include_vectors = false;
};

struct ScanJob {
  std::vector<double> kappa_values;
  std::vector<cplx> track_energies;
  spectra::Tolerances tol;
};

struct TheoremJob {
  std::string pair;  // ring_pair | ssh_edge | cylinder_edge | two_site_basis
  double k = 0.0;
  int l0 = 1;
  models::RowProfile profile = models::RowProfile::Uniform;
  std::optional<cplx> energy;
  double tol = 1e-8;
  std::optional<double> scale;  // resolved from "auto" during validation
};

struct EvolveJob {
  std::string initial_state;
  int site = 1;
  std::string target;
  models::RowProfile profile = models::RowProfile::Uniform;
  double t_end = 0.0;
  std::vector<double> snapshot_times;
  double fidelity_step = 5.0;
  dynamics::PropagationConfig propagation;
};

struct LadderJob {
  bool infinite = true;
  int k_count = 49;
  bool lattice_check = true;
};

using JobParams = std::variant<SpectrumJob, ScanJob, TheoremJob, EvolveJob, LadderJob>;

struct JobConfig {
  Json normalized;  // config with defaults applied, echoed into outputs
  models::ModelSpec model;
  std::string kind;
  JobParams params;
};

struct ValidationResult {
  std::optional<JobConfig> config;
  std::vector<std::string> errors;
  bool ok() const noexcept { return config.has_value(); }
};

namespace detail {

inline cplx complex_of(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  return {j[0].get<double>(), j[1].get<double>()};
}

inline models::RowProfile profile_of(const Json& j) {
  return j.get<std::string>() == "staggered" ? models::RowProfile::Staggered : models::RowProfile::Uniform;
}

inline models::ModelSpec model_of(const Json& m) {
  const std::string f = m["family"];
  if (f == "ring") return models::RingSpec{m["N_half"]};
  if (f == "ring_with_hop")
    return models::RingWithHopSpec{m["N_half"], m["l0"], m["r"], complex_of(m["kappa"])};
  if (f == "kspace_ring") return models::KspaceRingSpec{m["N_sites"], complex_of(m["kappa"])};
  if (f == "ladder") return models::LadderSpec{m["N_rungs"], m["J"], m["n_max"]};
  if (f == "ssh_chain") return models::SshChainSpec{m["N_cells"], m["delta"], complex_of(m["kappa"])};
  if (f == "ssh_cylinder")
    return models::SshCylinderSpec{m["M_rows"], m["N_cells"], m["delta"], m["J_inter"], complex_of(m["kappa"]),
                                   m["bond_prefactor"]};
  return models::TwoSiteSpec{complex_of(m["kappa"]), m["eps0"]};
}

inline std::size_t model_dim(const models::ModelSpec& spec) {
  return std::visit(overloaded{
                        [](const models::RingSpec& s) { return 2 * std::size_t(s.n_half); },
                        [](const models::RingWithHopSpec& s) { return 2 * std::size_t(s.n_half); },
                        [](const models::KspaceRingSpec& s) { return std::size_t(s.n_sites); },
                        [](const models::LadderSpec& s) { return 2 * std::size_t(s.n_rungs); },
                        [](const models::SshChainSpec& s) { return 2 * std::size_t(s.n_cells); },
                        [](const models::SshCylinderSpec& s) { return 2 * std::size_t(s.m_rows) * s.n_cells; },
                        [](const models::TwoSiteSpec&) { return std::size_t{2}; },
                    },
                    spec);
}

}  // namespace detail

/// Schema validation, then cross-field checks; every violation is reported.
inline ValidationResult validate(Json config) {
  ValidationResult out;
  out.errors = SchemaValidator::embedded().validate(config);
  if (!out.errors.empty()) return out;

  auto& errors = out.errors;
  auto fail = [&](const std::string& path, const std::string& msg) { errors.push_back(path + ": " + msg); };
  const Json& m = config["model"];
  Json& j = config["job"];
  const std::string family = m["family"];
  const std::string kind = j["kind"];

  JobConfig cfg;
  cfg.kind = kind;
  cfg.model = detail::model_of(m);
  const std::size_t dim = detail::model_dim(cfg.model);

  if (family == "ring_with_hop" && m["l0"].get<int>() > 2 * m["N_half"].get<int>())
    fail("$.model.l0", "must be <= 2*N_half (" + std::to_string(2 * m["N_half"].get<int>()) + ")");
  if (dim > 20000) fail("$.model", "lattice has " + std::to_string(dim) + " sites; the limit is 20000");

  if (kind == "spectrum") {
    if (dim > 2000) fail("$.model", "dense spectrum limited to 2000 sites (got " + std::to_string(dim) + ")");
    cfg.params = SpectrumJob{{j["tol_cluster"], j["tol_rank"]}, j["include_vectors"]};
  } else if (kind == "ep-scan") {
    if (family == "ring") fail("$.model.family", "plain ring has no non-Hermitian strength to sweep");
    if (dim > 2000) fail("$.model", "dense spectrum limited to 2000 sites (got " + std::to_string(dim) + ")");
    ScanJob s;
    s.kappa_values = j["kappa_values"].get<std::vector<double>>();
    for (const auto& e : j["track_energies"]) s.track_energies.push_back(detail::complex_of(e));
    s.tol = {j["tol_cluster"], j["tol_rank"]};
    cfg.params = s;
  } else if (kind == "theorem-check") {
    TheoremJob t;
    t.pair = j["pair"];
    t.tol = j["tol"];
    t.profile = detail::profile_of(j["row_profile"]);
    if (j.contains("energy")) t.energy = detail::complex_of(j["energy"]);
    static const std::map<std::string, std::vector<std::string>> allowed = {
        {"ring_pair", {"ring", "ring_with_hop"}},
        {"ssh_edge", {"ssh_chain"}},
        {"cylinder_edge", {"ssh_cylinder"}},
        {"two_site_basis", {"two_site"}}};
    const auto& fams = allowed.at(t.pair);
    if (std::find(fams.begin(), fams.end(), family) == fams.end())
      fail("$.job.pair", "'" + t.pair + "' does not apply to model family '" + family + "'");
    if (t.pair == "ring_pair") {
      if (!j.contains("k")) {
        fail("$.job.k", "is required for pair = ring_pair");
      } else {
        t.k = j["k"];
        const int n_half = m["N_half"];
        const double x = t.k * n_half / std::numbers::pi;
        const double n = std::round(x);
        if (std::abs(x - n) > 1e-9 * std::max(1.0, std::abs(x)) || std::fmod(std::abs(n), n_half) == 0.0)
          fail("$.job.k", "must be pi*n/N_half with n not a multiple of N_half");
      }
      t.l0 = j.contains("l0") ? j["l0"].get<int>() : (m.contains("l0") ? m["l0"].get<int>() : 1);
      if (t.l0 > 2 * m["N_half"].get<int>()) fail("$.job.l0", "must be <= 2*N_half");
    }
    if (t.profile == models::RowProfile::Staggered && family == "ssh_cylinder" && m["M_rows"].get<int>() % 4 != 0)
      fail("$.job.row_profile", "staggered rows need M_rows divisible by 4");
    const auto& fs = j["finite_size_scale"];
    if (fs.is_number()) {
      t.scale = fs.get<double>();
    } else if (fs == "auto") {
      if (family == "ssh_chain")
        t.scale = models::ssh_boundary_residual(m["N_cells"], m["delta"]);
      else if (family == "ssh_cylinder")
        t.scale = models::cylinder_boundary_residual(m["M_rows"], m["N_cells"], m["delta"], m["bond_prefactor"]);
    }
    cfg.params = t;
  } else if (kind == "evolve") {
    EvolveJob e;
    e.initial_state = j["initial_state"];
    e.target = j["target"];
    e.profile = detail::profile_of(j["row_profile"]);
    e.t_end = j["t_end"];
    e.snapshot_times = j["snapshot_times"].get<std::vector<double>>();
    e.fidelity_step = j["fidelity_step"];
    e.propagation.dt = j["dt"];
    e.propagation.method =
        j["method"] == "DENSE_EXPM" ? dynamics::Method::DenseExpm : dynamics::Method::FixedStepRk4;
    e.propagation.renormalize_internally = j["renormalize"];
    auto needs = [&](const std::string& what, const std::string& value, const std::string& fam) {
      if (family != fam) fail("$.job." + what, "'" + value + "' needs model family '" + fam + "'");
    };
    if (e.initial_state == "stripe" || e.initial_state == "edge_odd" || e.initial_state == "edge_even")
      needs("initial_state", e.initial_state, "ssh_cylinder");
    if (e.initial_state == "ssh_left" || e.initial_state == "ssh_right")
      needs("initial_state", e.initial_state, "ssh_chain");
    if (e.target == "edge_odd" || e.target == "edge_even") needs("target", e.target, "ssh_cylinder");
    if (e.target == "ssh_left" || e.target == "ssh_right") needs("target", e.target, "ssh_chain");
    if (e.initial_state == "site") {
      if (!j.contains("site"))
        fail("$.job.site", "is required for initial_state = site");
      else if (j["site"].get<std::size_t>() > dim)
        fail("$.job.site", "must be <= " + std::to_string(dim));
      else
        e.site = j["site"];
    }
    for (std::size_t i = 0; i < e.snapshot_times.size(); ++i)
      if (e.snapshot_times[i] > e.t_end)
        fail("$.job.snapshot_times[" + std::to_string(i) + "]", "must be <= t_end");
    if (e.t_end / e.fidelity_step > 1e6) fail("$.job.fidelity_step", "grid would exceed 1e6 points");
    if (e.propagation.method == dynamics::Method::DenseExpm && dim > dynamics::kDenseExpmMaxDim)
      fail("$.job.method", "DENSE_EXPM is limited to " + std::to_string(dynamics::kDenseExpmMaxDim) + " sites");
    cfg.params = e;
  } else {
    if (family != "ladder") fail("$.model.family", "ladder-analytic needs model family 'ladder'");
    LadderJob l;
    l.infinite = j["series"] == "infinite";
    l.k_count = j["k_count"];
    l.lattice_check = j["lattice_check"];
    if (l.lattice_check && dim > 2000) fail("$.job.lattice_check", "lattice too large for a dense comparison");
    cfg.params = l;
  }
  if (!errors.empty()) return out;
  cfg.normalized = std::move(config);
  out.config = std::move(cfg);
  return out;
}

inline ValidationResult validate_text(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    return {std::nullopt, {std::string("$: invalid JSON: ") + e.what()}};
  }
  return validate(std::move(j));
}

}  // namespace coalesce::cli
