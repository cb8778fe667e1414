#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <string>
#include <vector>

#include "coalesce/cli/config.hpp"
#include "coalesce/dynamics.hpp"
#include "coalesce/io/csv.hpp"
#include "coalesce/io/json.hpp"
#include "coalesce/spectra.hpp"
#include "coalesce/theorem.hpp"

namespace coalesce::cli {

namespace fs = std::filesystem;

/// One artifact of a job. `role` is the job key naming it ("csv", "report", ...).
struct Artifact {
  std::string role;
  fs::path path;
  std::string content;
};

namespace detail {

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

inline Json envelope(const JobConfig& cfg) {
  Json j;
  j["tool"] = io::tool_info();
  j["config"] = cfg.normalized;
  return j;
}

inline Json warnings_json(const models::ModelPair& m) { return Json(m.warnings); }

inline fs::path job_path(const JobConfig& cfg, const std::string& key) {
  return cfg.normalized["job"][key].get<std::string>();
}

inline std::vector<Artifact> run_spectrum(const JobConfig& cfg, const SpectrumJob& job) {
  const auto model = models::build(cfg.model);
  auto rep = spectra::classify(model.dense(), job.tol);
  rep.model = cfg.model;
  const double kappa = models::non_hermitian_strength(cfg.model).real();
  Json j = envelope(cfg);
  j["warnings"] = warnings_json(model);
  j["report"] = io::report_json(rep, job.include_vectors);
  return {{"csv", job_path(cfg, "csv"), io::spectrum_csv(rep, kappa)}, {"report", job_path(cfg, "report"), dump(j)}};
}

inline std::vector<Artifact> run_scan(const JobConfig& cfg, const ScanJob& job) {
  std::vector<double> kappas = job.kappa_values;
  const auto rows = spectra::ep_scan(cfg.model, kappas, job.track_energies, job.tol);
  Json j = envelope(cfg);
  Json table = Json::array();
  for (const auto& r : rows) {
    Json e{{"kappa", r.kappa}, {"tracked_id", r.tracked_id}};
    if (r.cluster) {
      e["representative"] = io::complex_json(r.cluster->representative);
      e["class"] = spectra::to_string(r.cluster->classification);
      e["phase_rigidity"] = r.cluster->min_phase_rigidity;
      e["ep_clusters"] = r.ep_clusters;
    } else {
      e["error"] = r.error;
    }
    table.push_back(e);
  }
  j["rows"] = table;
  return {{"csv", job_path(cfg, "csv"), io::scan_csv(rows)}, {"report", job_path(cfg, "report"), dump(j)}};
}

inline std::vector<Artifact> run_theorem(const JobConfig& cfg, const TheoremJob& job) {
  const auto model = models::build(cfg.model);
  models::StateVector a, b;
  if (job.pair == "ring_pair") {
    const int n_half = static_cast<int>(model.dim() / 2);
    std::tie(a, b) = models::ring_pair_states(n_half, job.k, job.l0);
  } else if (job.pair == "ssh_edge") {
    const auto& s = std::get<models::SshChainSpec>(cfg.model);
    std::tie(a, b) = models::ssh_edge_modes(s.n_cells, s.delta);
  } else if (job.pair == "cylinder_edge") {
    const auto& s = std::get<models::SshCylinderSpec>(cfg.model);
    auto [le, lo] = models::cylinder_edge_modes(s.m_rows, s.n_cells, s.delta, job.profile);
    a = std::move(lo);
    b = std::move(le);
  } else {
    a = {numkit::CVector{1.0, 0.0}, model.site_map};
    b = {numkit::CVector{0.0, 1.0}, model.site_map};
  }
  theorem::CheckOptions opt;
  opt.energy = job.energy;
  opt.tol = job.tol;
  opt.finite_size_scale = job.scale;
  const auto rep = theorem::check_transition(model, a, b, opt);
  Json j = envelope(cfg);
  j["warnings"] = warnings_json(model);
  j["report"] = io::theorem_json(rep);
  Json hops = Json::array();
  for (const auto& [i, k] : theorem::suggest_hops(a, b)) hops.push_back(Json::array({i, k}));
  j["suggested_hops_count"] = hops.size();
  return {{"report", job_path(cfg, "report"), dump(j)}};
}

inline std::vector<double> evolve_times(const EvolveJob& job) {
  std::vector<double> t = job.snapshot_times;
  const auto count = static_cast<long>(std::floor(job.t_end / job.fidelity_step * (1 + 1e-12)));
  for (long i = 0; i <= count; ++i) t.push_back(static_cast<double>(i) * job.fidelity_step);
  t.push_back(job.t_end);
  std::sort(t.begin(), t.end());
  t.erase(std::unique(t.begin(), t.end()), t.end());
  return t;
}

inline std::vector<Artifact> run_evolve(const JobConfig& cfg, const EvolveJob& job) {
  const auto model = models::build(cfg.model);
  auto edge = [&](bool odd) {
    const auto& s = std::get<models::SshCylinderSpec>(cfg.model);
    auto [le, lo] = models::cylinder_edge_modes(s.m_rows, s.n_cells, s.delta, job.profile);
    return odd ? lo : le;
  };
  auto ssh = [&](bool left) {
    const auto& s = std::get<models::SshChainSpec>(cfg.model);
    auto [l, r] = models::ssh_edge_modes(s.n_cells, s.delta);
    return left ? l : r;
  };
  auto state = [&](const std::string& which) -> models::StateVector {
    if (which == "stripe") {
      const auto& s = std::get<models::SshCylinderSpec>(cfg.model);
      return dynamics::stripe_initial_state(s.m_rows, s.n_cells);
    }
    if (which == "edge_odd" || which == "edge_even") return edge(which == "edge_odd");
    if (which == "ssh_left" || which == "ssh_right") return ssh(which == "ssh_left");
    models::StateVector s{numkit::CVector(model.dim()), model.site_map};
    s.amplitudes[job.site - 1] = 1.0;
    return s;
  };
  const auto psi0 = state(job.initial_state);
  std::optional<models::StateVector> target;
  if (job.target == "initial")
    target = psi0;
  else if (job.target != "none")
    target = state(job.target);

  const auto times = evolve_times(job);
  const auto trace = dynamics::evolve(model, psi0, times, job.propagation, target);

  Json j = envelope(cfg);
  j["warnings"] = warnings_json(model);
  j["trace"] = io::trace_summary_json(trace);
  if (std::holds_alternative<models::SshCylinderSpec>(cfg.model)) {
    // the initial state's overlap with both edge modes
    j["initial_overlap"] = {
        {"edge_even", std::abs(numkit::inner(edge(false).amplitudes, psi0.amplitudes))},
        {"edge_odd", std::abs(numkit::inner(edge(true).amplitudes, psi0.amplitudes))}};
  }
  std::vector<Artifact> out{{"snapshots_csv", job_path(cfg, "snapshots_csv"), io::snapshots_csv(trace, job.snapshot_times)}};
  if (target)
    out.push_back({"fidelity_csv", job_path(cfg, "fidelity_csv"),
                   io::fidelity_csv(dynamics::fidelity_series(trace, *target))});
  out.push_back({"report", job_path(cfg, "report"), dump(j)});
  return out;
}

inline std::vector<double> ladder_grid(int count) {
  constexpr double pi = std::numbers::pi;
  if (count == 1) return {pi / 2};
  std::vector<double> k;
  for (int i = 0; i < count; ++i) k.push_back(pi / 50 + (pi - 2 * pi / 50) * i / (count - 1));
  return k;
}

inline std::vector<Artifact> run_ladder(const JobConfig& cfg, const LadderJob& job) {
  const auto& s = std::get<models::LadderSpec>(cfg.model);
  const auto cutoff = job.infinite ? models::SeriesCutoff::infinite() : models::SeriesCutoff::terms(s.n_max);
  const auto grid = ladder_grid(job.k_count);
  std::ostringstream csv;
  csv << "k,delta,re_eps_plus,im_eps_plus,re_eps_minus,im_eps_minus,gap\n";
  for (double k : grid) {
    const auto b = models::ladder_bloch(k, s.j, cutoff);
    csv << io::format_double(k) << ',' << io::format_double(b.delta) << ',' << io::format_double(b.eps_plus.real())
        << ',' << io::format_double(b.eps_plus.imag()) << ',' << io::format_double(b.eps_minus.real()) << ','
        << io::format_double(b.eps_minus.imag()) << ',' << io::format_double(b.gap()) << '\n';
  }
  const auto g = spectra::ladder_gap_closing(s.j, cutoff, grid);
  Json j = envelope(cfg);
  j["min_gap"] = g.min_gap;
  j["argmin_k"] = g.argmin_k;
  const double x = s.j * std::numbers::pi / 4;
  j["step_limit_gap"] = 2.0 * std::sqrt(std::abs((1 - x) * (1 + x)));
  if (job.lattice_check) {
    const auto model = models::build(cfg.model);
    const int n_max = std::min(s.n_max, s.n_rungs / 2);
    const auto es = numkit::eig_full(model.dense());
    j["warnings"] = warnings_json(model);
    j["lattice_vs_bloch"] = spectra::multiset_distance(es.eigenvalues, spectra::ladder_bloch_union(s.n_rungs, s.j, n_max));
  }
  return {{"csv", job_path(cfg, "csv"), csv.str()}, {"report", job_path(cfg, "report"), dump(j)}};
}

}  // namespace detail

inline std::vector<Artifact> run_job(const JobConfig& cfg) {
  return std::visit(overloaded{
                        [&](const SpectrumJob& j) { return detail::run_spectrum(cfg, j); },
                        [&](const ScanJob& j) { return detail::run_scan(cfg, j); },
                        [&](const TheoremJob& j) { return detail::run_theorem(cfg, j); },
                        [&](const EvolveJob& j) { return detail::run_evolve(cfg, j); },
                        [&](const LadderJob& j) { return detail::run_ladder(cfg, j); },
                    },
                    cfg.params);
}

/// The four canonical configurations.
inline std::vector<std::pair<std::string, Json>> canonical_configs() {
  const double pi = std::numbers::pi;
  return {
      {"ring12_scan.json",
       Json{{"model", {{"family", "ring_with_hop"}, {"N_half", 6}, {"l0", 1}, {"r", 1}, {"kappa", 0.5}}},
            {"job", {{"kind", "ep-scan"}, {"kappa_values", {0.0, 0.05, 0.1, 0.5, 1.0, 2.0, 5.0}}}}}},
      {"ladder.json",
       Json{{"model", {{"family", "ladder"}, {"N_rungs", 64}, {"J", 4 / pi}, {"n_max", 16}}},
            {"job", {{"kind", "ladder-analytic"}, {"series", "infinite"}}}}},
      {"ssh.json",
       Json{{"model", {{"family", "ssh_chain"}, {"N_cells", 20}, {"delta", 0.1}, {"kappa", 0.5}}},
            {"job", {{"kind", "theorem-check"}, {"pair", "ssh_edge"}, {"energy", 0.0}}}}},
      {"fig4.json",
       Json{{"model",
             {{"family", "ssh_cylinder"}, {"M_rows", 20}, {"N_cells", 100}, {"delta", 0.1}, {"J_inter", 1.0},
              {"kappa", 0.5}}},
            {"job",
             {{"kind", "evolve"},
              {"initial_state", "stripe"},
              {"target", "edge_odd"},
              {"t_end", 800},
              {"snapshot_times", {0, 100, 200, 800}},
              {"fidelity_step", 5}}}}},
  };
}

}  // namespace coalesce::cli
