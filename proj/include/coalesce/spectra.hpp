#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "coalesce/models.hpp"
#include "coalesce/numkit.hpp"

namespace coalesce::spectra {

using numkit::ComplexMatrix;
using numkit::cplx;
using numkit::CVector;
using numkit::EigenSystem;

enum class Classification { Simple, DP, EP };

inline const char* to_string(Classification c) {
  switch (c) {
    case Classification::Simple: return "SIMPLE";
    case Classification::DP: return "DP";
    case Classification::EP: return "EP";
  }
  return "?";
}

struct Tolerances {
  double cluster = 1e-6;  // relative to max(1, ||H||_F)
  double rank = 1e-6;
};

struct Cluster {
  cplx representative;               // mean of the member eigenvalues
  std::vector<std::size_t> members;  // indices into the EigenSystem
  std::size_t algebraic = 0;
  std::size_t geometric = 0;
  // Smallest principal cosine between the left and right eigen-spans of the
  // cluster; |<u|v>| for a simple eigenvalue, 0 at an exceptional point.
  double min_phase_rigidity = 1.0;
  double min_biorthogonal_norm = 1.0;
  Classification classification = Classification::Simple;
  // Unit null vector of H - representative * I; filled for EP clusters.
  std::optional<CVector> coalescing_vector;
};

struct SpectralReport {
  std::optional<models::ModelSpec> model;
  EigenSystem eigen;
  std::vector<Cluster> clusters;
  Tolerances tolerances;

  std::size_t count(Classification c) const {
    return static_cast<std::size_t>(std::count_if(clusters.begin(), clusters.end(),
                                                  [&](const Cluster& k) { return k.classification == c; }));
  }

  /// Cluster whose representative is nearest to `energy`; ties go to the smaller imaginary part.
  const Cluster& nearest(cplx energy) const {
    if (clusters.empty()) throw std::logic_error("SpectralReport::nearest: no clusters");
    const Cluster* best = &clusters.front();
    for (const auto& c : clusters) {
      const double d = std::abs(c.representative - energy), db = std::abs(best->representative - energy);
      if (d < db || (d == db && c.representative.imag() < best->representative.imag())) best = &c;
    }
    return *best;
  }
};

/// Single-linkage clustering with link distance tol_cluster * max(1, ||H||_F).
inline std::vector<Cluster> cluster_spectrum(const EigenSystem& es, double tol_cluster) {
  if (!(tol_cluster > 0.0)) throw std::invalid_argument("cluster_spectrum: tol_cluster must be > 0");
  const std::size_t n = es.dim();
  const double link = tol_cluster * es.residual_scale();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(es.eigenvalues[i] - es.eigenvalues[j]) <= link) {
        const auto a = find(i), b = find(j);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }

  std::vector<Cluster> out;
  std::vector<std::size_t> slot(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto root = find(i);
    if (slot[root] == n) {
      slot[root] = out.size();
      out.emplace_back();
    }
    out[slot[root]].members.push_back(i);
  }
  for (auto& c : out) {
    cplx sum{};
    for (auto m : c.members) sum += es.eigenvalues[m];
    c.representative = sum / static_cast<double>(c.members.size());
    c.algebraic = c.members.size();
    c.geometric = c.algebraic;
  }
  return out;
}

/// <u|v>; its modulus is the phase rigidity of the pair.
inline cplx biorthogonal_norm(std::span<const cplx> u_left, std::span<const cplx> v_right) {
  return numkit::inner(u_left, v_right);
}

namespace detail {

inline double principal_cosine(const std::vector<CVector>& left, const std::vector<CVector>& right, double tol) {
  const auto ql = numkit::orthonormal_span(left, tol);
  const auto qr = numkit::orthonormal_span(right, tol);
  if (ql.empty() || qr.empty()) return 0.0;
  std::vector<CVector> cols(qr.size(), CVector(ql.size()));
  for (std::size_t j = 0; j < qr.size(); ++j)
    for (std::size_t i = 0; i < ql.size(); ++i) cols[j][i] = numkit::inner(ql[i], qr[j]);
  const auto sig = numkit::singular_values(std::move(cols));
  const std::size_t k = std::min(ql.size(), qr.size());
  return std::clamp(sig[k - 1], 0.0, 1.0);
}

}  // namespace detail

/// Fills multiplicities, rigidity and class of each cluster in place.
inline void analyse_clusters(const ComplexMatrix& h, const EigenSystem& es, std::vector<Cluster>& clusters,
                             const Tolerances& tol) {
  if (!(tol.rank > 0.0)) throw std::invalid_argument("classify: tol_rank must be > 0");
  for (auto& c : clusters) {
    std::vector<CVector> right, left;
    for (auto m : c.members) {
      right.push_back(es.right_vectors[m]);
      left.push_back(es.left_vectors[m]);
    }
    c.geometric = std::clamp<std::size_t>(numkit::numerical_rank(right, tol.rank), 1, c.algebraic);
    c.min_phase_rigidity = detail::principal_cosine(left, right, tol.rank);
    c.min_biorthogonal_norm = c.min_phase_rigidity;
    if (c.geometric < c.algebraic)
      c.classification = Classification::EP;
    else if (c.algebraic >= 2)
      c.classification = Classification::DP;
    else
      c.classification = Classification::Simple;
    if (c.classification == Classification::EP) {
      ComplexMatrix shifted = h;
      for (std::size_t i = 0; i < h.dim(); ++i) shifted(i, i) -= c.representative;
      c.coalescing_vector = numkit::smallest_right_singular_vector(shifted);
    }
  }
}

inline SpectralReport classify(const ComplexMatrix& h, const Tolerances& tol = {}) {
  SpectralReport rep;
  rep.tolerances = tol;
  rep.eigen = numkit::eig_full(h);
  rep.clusters = cluster_spectrum(rep.eigen, tol.cluster);
  analyse_clusters(h, rep.eigen, rep.clusters, tol);
  return rep;
}

inline SpectralReport classify(const models::ModelSpec& spec, const Tolerances& tol = {}) {
  auto rep = classify(models::build(spec).dense(), tol);
  rep.model = spec;
  return rep;
}

// ---- parameter sweeps -------------------------------------------------------

struct ScanRow {
  double kappa = 0.0;
  std::size_t tracked_id = 0;
  std::optional<Cluster> cluster;  // empty when the row failed
  std::size_t ep_clusters = 0;     // EP clusters in the whole spectrum
  std::string error;
};

/// Rebuilds the model for each strength and follows the clusters that start
/// nearest to `track_energies`. Failures are recorded per row and the sweep
/// continues.
inline std::vector<ScanRow> ep_scan(const models::ModelSpec& family, const std::vector<double>& kappa_values,
                                    const std::vector<cplx>& track_energies, const Tolerances& tol = {}) {
  if (kappa_values.empty()) throw std::invalid_argument("ep_scan: kappa_values must be nonempty");
  std::vector<cplx> tracked = track_energies;
  std::vector<ScanRow> rows;
  for (double kappa : kappa_values) {
    try {
      const auto spec = models::with_strength(family, kappa);
      const auto rep = classify(spec, tol);
      const std::size_t eps = rep.count(Classification::EP);
      for (std::size_t t = 0; t < tracked.size(); ++t) {
        const auto& c = rep.nearest(tracked[t]);
        rows.push_back({kappa, t, c, eps, {}});
        tracked[t] = c.representative;
      }
    } catch (const std::exception& e) {
      for (std::size_t t = 0; t < tracked.size(); ++t) rows.push_back({kappa, t, std::nullopt, 0, e.what()});
    }
  }
  return rows;
}

struct GapClosing {
  double min_gap = std::numeric_limits<double>::infinity();
  double argmin_k = 0.0;
};

/// Minimum over k_grid of |eps_+ - eps_-| from the analytic Bloch spectrum.
/// Grid points must stay at least pi/50 away from 0 and +-pi.
inline GapClosing ladder_gap_closing(double j_coupling, models::SeriesCutoff cutoff,
                                     const std::vector<double>& k_grid) {
  constexpr double margin = std::numbers::pi / 50.0;
  GapClosing g;
  for (double k : k_grid) {
    const double ak = std::abs(k);
    if (ak < margin * (1 - 1e-12) || std::numbers::pi - ak < margin * (1 - 1e-12))
      throw InvalidSpec("ladder_gap_closing: k = " + std::to_string(k) + " is within pi/50 of 0 or pi");
    const double gap = models::ladder_bloch(k, j_coupling, cutoff).gap();
    if (gap < g.min_gap) {
      g.min_gap = gap;
      g.argmin_k = k;
    }
  }
  return g;
}

/// Eigenvalues of every h_k on the lattice grid k = 2 pi n / N_rungs.
inline CVector ladder_bloch_union(int n_rungs, double j_coupling, int n_max) {
  CVector out;
  for (int n = 0; n < n_rungs; ++n) {
    const double k = 2.0 * std::numbers::pi * n / n_rungs;
    const auto b = models::ladder_bloch(k, j_coupling, models::SeriesCutoff::terms(n_max));
    out.push_back(b.eps_plus);
    out.push_back(b.eps_minus);
  }
  return out;
}

/// Largest distance in a greedy nearest matching of two eigenvalue multisets.
inline double multiset_distance(CVector a, CVector b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  std::vector<bool> used(b.size(), false);
  double worst = 0.0;
  std::sort(a.begin(), a.end(), numkit::eigenvalue_less);
  for (const auto& x : a) {
    std::size_t best = b.size();
    double bd = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < b.size(); ++j)
      if (!used[j] && std::abs(b[j] - x) < bd) {
        bd = std::abs(b[j] - x);
        best = j;
      }
    used[best] = true;
    worst = std::max(worst, bd);
  }
  return worst;
}

}  // namespace coalesce::spectra
