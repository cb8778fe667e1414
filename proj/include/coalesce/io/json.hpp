#pragma once

#include <json.hpp>
#include <string>

#include "coalesce/dynamics.hpp"
#include "coalesce/models.hpp"
#include "coalesce/spectra.hpp"
#include "coalesce/theorem.hpp"

namespace coalesce::io {

using Json = nlohmann::ordered_json;

#ifndef COALESCE_VERSION
#define COALESCE_VERSION "0.0.0"
#endif

inline Json tool_info() { return Json{{"name", "coalesce"}, {"version", COALESCE_VERSION}}; }

// complex numbers are [re, im]
inline Json complex_json(numkit::cplx z) { return Json::array({z.real(), z.imag()}); }

inline Json vector_json(const numkit::CVector& v) {
  Json a = Json::array();
  for (const auto& z : v) a.push_back(complex_json(z));
  return a;
}

inline Json model_json(const models::ModelSpec& spec) {
  Json j;
  j["family"] = models::family_name(spec);
  std::visit(overloaded{
                 [&](const models::RingSpec& s) { j["N_half"] = s.n_half; },
                 [&](const models::RingWithHopSpec& s) {
                   j["N_half"] = s.n_half;
                   j["l0"] = s.l0;
                   j["r"] = s.r;
                   j["kappa"] = complex_json(s.kappa);
                 },
                 [&](const models::KspaceRingSpec& s) {
                   j["N_sites"] = s.n_sites;
                   j["kappa"] = complex_json(s.kappa);
                 },
                 [&](const models::LadderSpec& s) {
                   j["N_rungs"] = s.n_rungs;
                   j["J"] = s.j;
                   j["n_max"] = s.n_max;
                 },
                 [&](const models::SshChainSpec& s) {
                   j["N_cells"] = s.n_cells;
                   j["delta"] = s.delta;
                   j["kappa"] = complex_json(s.kappa);
                 },
                 [&](const models::SshCylinderSpec& s) {
                   j["M_rows"] = s.m_rows;
                   j["N_cells"] = s.n_cells;
                   j["delta"] = s.delta;
                   j["J_inter"] = s.j_inter;
                   j["kappa"] = complex_json(s.kappa);
                   j["bond_prefactor"] = s.bond_prefactor;
                 },
                 [&](const models::TwoSiteSpec& s) {
                   j["kappa"] = complex_json(s.kappa);
                   j["eps0"] = s.eps0;
                 },
             },
             spec);
  return j;
}

inline Json cluster_json(std::size_t id, const spectra::Cluster& c) {
  Json j;
  j["id"] = id;
  j["representative"] = complex_json(c.representative);
  j["members"] = c.members;
  j["alg_mult"] = c.algebraic;
  j["geo_mult"] = c.geometric;
  j["phase_rigidity"] = c.min_phase_rigidity;
  j["min_biorthogonal_norm"] = c.min_biorthogonal_norm;
  j["class"] = spectra::to_string(c.classification);
  if (c.coalescing_vector) j["coalescing_vector"] = vector_json(*c.coalescing_vector);
  return j;
}

inline Json report_json(const spectra::SpectralReport& rep, bool include_vectors = false) {
  Json j;
  if (rep.model) j["model"] = model_json(*rep.model);
  j["tolerances"] = {{"cluster", rep.tolerances.cluster}, {"rank", rep.tolerances.rank}};
  j["matrix_norm"] = rep.eigen.matrix_norm;
  j["eigenvalues"] = vector_json(rep.eigen.eigenvalues);
  j["right_residuals"] = rep.eigen.right_residuals;
  j["left_residuals"] = rep.eigen.left_residuals;
  if (include_vectors) {
    Json r = Json::array(), l = Json::array();
    for (std::size_t i = 0; i < rep.eigen.dim(); ++i) {
      r.push_back(vector_json(rep.eigen.right_vectors[i]));
      l.push_back(vector_json(rep.eigen.left_vectors[i]));
    }
    j["right_vectors"] = r;
    j["left_vectors"] = l;
  }
  Json cs = Json::array();
  for (std::size_t i = 0; i < rep.clusters.size(); ++i) cs.push_back(cluster_json(i, rep.clusters[i]));
  j["clusters"] = cs;
  j["counts"] = {{"SIMPLE", rep.count(spectra::Classification::Simple)},
                 {"DP", rep.count(spectra::Classification::DP)},
                 {"EP", rep.count(spectra::Classification::EP)}};
  return j;
}

inline Json theorem_json(const theorem::TheoremReport& r) {
  Json j;
  j["verdict"] = theorem::to_string(r.verdict);
  j["residual_H0A"] = r.residual_H0A;
  j["residual_H0B"] = r.residual_H0B;
  j["residual_HpA"] = r.residual_HpA;
  j["residual_HpdB"] = r.residual_HpdB;
  j["overlap_AB"] = complex_json(r.overlap_AB);
  j["E"] = complex_json(r.energy);
  j["E_estimated"] = r.energy_estimated;
  j["tol"] = r.tol;
  j["declared_scale"] = r.declared_scale ? Json(*r.declared_scale) : Json(nullptr);
  j["hypotheses_hold"] = r.hypotheses_hold;
  j["conclusion_checked"] = r.conclusion_checked;
  j["conclusion_holds"] = r.conclusion_holds;
  if (r.cluster_class) j["cluster_class"] = spectra::to_string(*r.cluster_class);
  if (r.cluster_energy) j["cluster_energy"] = complex_json(*r.cluster_energy);
  if (r.coalescing_distance) j["coalescing_distance"] = *r.coalescing_distance;
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

inline Json trace_summary_json(const dynamics::EvolutionTrace& trace) {
  Json j;
  j["method"] = dynamics::to_string(trace.method);
  j["dt"] = trace.dt;
  j["steps"] = trace.steps;
  Json snaps = Json::array();
  for (const auto& s : trace.snapshots) {
    Json e{{"t", s.t}, {"norm", s.norm}};
    e["fidelity"] = s.fidelity ? Json(*s.fidelity) : Json(nullptr);
    snaps.push_back(e);
  }
  j["snapshots"] = snaps;
  return j;
}

}  // namespace coalesce::io
