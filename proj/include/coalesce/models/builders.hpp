#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "coalesce/models/spec.hpp"
#include "coalesce/numkit/matrix.hpp"

namespace coalesce::models {

namespace detail {

inline void require(bool ok, const std::string& msg) {
  if (!ok) throw InvalidSpec(msg);
}

inline std::size_t wrap(long i, long n) { return static_cast<std::size_t>(((i % n) + n) % n); }

inline void flag_delta_edges(double delta, std::vector<std::string>& warnings) {
  if (delta < 1e-3 || delta > 1.0 - 1e-3)
    warnings.push_back("delta = " + std::to_string(delta) +
                       " is close to the edge of (0,1); edge-mode localisation degenerates");
}

}  // namespace detail

/// Uniform ring of 2 * n_half sites with unit hopping.
inline ModelPair build_ring(int n_half) {
  detail::require(n_half >= 2, "ring: n_half must be >= 2 (got " + std::to_string(n_half) + ")");
  const long n = 2L * n_half;
  ModelPair m{Operator(n), Operator(n), SiteMap::linear("ring", n), {}};
  for (long j = 0; j < n; ++j) m.h0.add_hermitian_pair(j, detail::wrap(j + 1, n), 1.0);
  return m;
}

/// Adds kappa * c^dag_{l0} c_{l0+r} (1-based labels) to Hp. Wraps on rings,
/// must stay inside an open chain.
inline ModelPair attach_unidirectional(ModelPair model, long l0, long r, cplx kappa) {
  const auto& map = *model.site_map;
  detail::require(map.layout == "ring" || map.layout == "chain",
                  "attach_unidirectional: model must be a ring or chain (got " + map.layout + ")");
  const long n = static_cast<long>(map.size());
  std::size_t row, col;
  if (map.periodic()) {
    row = detail::wrap(l0 - 1, n);
    col = detail::wrap(l0 - 1 + r, n);
  } else {
    detail::require(l0 >= 1 && l0 <= n && l0 + r >= 1 && l0 + r <= n,
                    "attach_unidirectional: sites " + std::to_string(l0) + " -> " +
                        std::to_string(l0 + r) + " outside open chain of " + std::to_string(n));
    row = static_cast<std::size_t>(l0 - 1);
    col = static_cast<std::size_t>(l0 - 1 + r);
  }
  detail::require(row != col, "attach_unidirectional: hop must connect two distinct sites");
  if (kappa != cplx{}) model.hp.add(row, col, kappa);
  return model;
}

inline ModelPair build_ring_with_hop(const RingWithHopSpec& s) {
  detail::require(s.r >= 1, "ring_with_hop: r must be >= 1");
  detail::require(s.l0 >= 1 && s.l0 <= 2 * s.n_half, "ring_with_hop: l0 must be a site label in [1, 2N]");
  return attach_unidirectional(build_ring(s.n_half), s.l0, s.r, s.kappa);
}

/// Unitary DFT matrix F(j, n) = exp(i k_n j) / sqrt(N), k_n = 2 pi n / N,
/// with 1-based site labels j.
inline numkit::ComplexMatrix dft_matrix(std::size_t n_sites) {
  numkit::ComplexMatrix f(n_sites);
  const double inv = 1.0 / std::sqrt(static_cast<double>(n_sites));
  for (std::size_t j = 0; j < n_sites; ++j)
    for (std::size_t n = 0; n < n_sites; ++n) {
      // reduce the phase index first so large rings keep full accuracy
      const auto m = ((j + 1) * n) % n_sites;
      const double phase = 2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(n_sites);
      f(j, n) = std::polar(inv, phase);
    }
  return f;
}

/// Uniform ring plus kappa * sum_{0<k<pi} c^dag_k c_{-k}, built in momentum space
/// and conjugated into the site basis with the DFT.
inline ModelPair build_kspace_ring(int n_sites, cplx kappa) {
  detail::require(n_sites >= 4, "kspace_ring: n_sites must be >= 4");
  const std::size_t n = n_sites;
  ModelPair m{Operator(n), Operator(n), SiteMap::linear("ring", n), {}};
  for (std::size_t j = 0; j < n; ++j) m.h0.add_hermitian_pair(j, (j + 1) % n, 1.0);

  numkit::ComplexMatrix d(n);
  for (std::size_t q = 1; 2 * q < n; ++q) d(q, n - q) = kappa;  // |k><-k|, 0 < k < pi
  const auto f = dft_matrix(n);
  const auto hp = f * d * f.adjoint();
  m.hp = Operator::from_dense(hp);
  return m;
}

/// The closed-form real-space coupling: i cot(pi (l+j)/N) / N on l+j odd (both
/// orders) and 1/2 on l+j in {N, 2N}. Diagnostic only; compare against
/// build_kspace_ring with kspace_cot_mismatch.
inline ModelPair build_kspace_ring_cot(int n_sites, cplx kappa) {
  detail::require(n_sites >= 4, "kspace_ring: n_sites must be >= 4");
  const long n = n_sites;
  ModelPair m{Operator(n), Operator(n), SiteMap::linear("ring", n), {}};
  for (long j = 0; j < n; ++j) m.h0.add_hermitian_pair(j, detail::wrap(j + 1, n), 1.0);
  for (long l = 1; l <= n; ++l)
    for (long j = 1; j <= n; ++j) {
      const long s = l + j;
      cplx v{};
      if (s % 2 == 1)
        v = cplx{0.0, 1.0} / std::tan(std::numbers::pi * static_cast<double>(s) / n) / static_cast<double>(n);
      else if (s == n || s == 2 * n)
        v = 0.5;
      if (v != cplx{}) m.hp.add(l - 1, j - 1, kappa * v);
    }
  return m;
}

/// Frobenius distance between the closed-form cot coupling and the DFT-built one.
inline double kspace_cot_mismatch(int n_sites, cplx kappa) {
  const auto exact = build_kspace_ring(n_sites, kappa).hp.to_dense();
  const auto approx = build_kspace_ring_cot(n_sites, kappa).hp.to_dense();
  return (exact - approx).frobenius_norm();
}

/// (1/N) cot(Delta pi / N), the long-range amplitude near l + j = nN + Delta.
inline double cot_coupling(int n_sites, int delta) {
  return 1.0 / (n_sites * std::tan(delta * std::numbers::pi / n_sites));
}

/// Two-leg ladder. Site (cell j, leg s) -> index 2(j-1) + (s-1); leg 1 is a, leg 2 is b.
inline ModelPair build_ladder(int n_rungs, double j_coupling, int n_max) {
  detail::require(n_rungs >= 2, "ladder: n_rungs must be >= 2");
  detail::require(n_max >= 1, "ladder: n_max must be >= 1");
  const long n = n_rungs;
  auto map = std::make_shared<const SiteMap>(SiteMap{"ladder", "cell", "leg", static_cast<std::size_t>(n), 2});
  ModelPair m{Operator(2 * n), Operator(2 * n), map, {}};
  const long cap = n / 2;
  if (n_max > cap) {
    m.warnings.push_back("n_max = " + std::to_string(n_max) + " capped to floor(n_rungs/2) = " +
                         std::to_string(cap));
    n_max = static_cast<int>(cap);
  }
  auto a = [&](long j) { return static_cast<std::size_t>(2 * detail::wrap(j, n)); };
  auto b = [&](long j) { return static_cast<std::size_t>(2 * detail::wrap(j, n) + 1); };
  for (long j = 0; j < n; ++j) {
    m.h0.add_hermitian_pair(a(j), b(j), 1.0);
    m.h0.add_hermitian_pair(a(j), a(j + 1), 1.0);
    m.h0.add_hermitian_pair(b(j), b(j + 1), 1.0);
  }
  if (j_coupling != 0.0) {
    const cplx pre{0.0, j_coupling / 2.0};
    for (long j = 0; j < n; ++j)
      for (long t = 1; t <= n_max; ++t) {
        const long span = 2 * t - 1;
        const cplx c = pre / static_cast<double>(span);
        // written terms plus their mirror hops j+span -> j with the same i,
        // the partner that yields the sine series in the Bloch matrix
        m.hp.add(a(j), b(j + span), c);
        m.hp.add(a(j + span), b(j), -c);
        m.hp.add(b(j), a(j + span), -c);
        m.hp.add(b(j + span), a(j), c);
      }
  }
  return m;
}

/// Open SSH chain of 2 n_cells sites, bonds (1 + (-1)^l delta)/2, plus kappa c^dag_1 c_{2N}.
inline ModelPair build_ssh_chain(int n_cells, double delta, cplx kappa) {
  detail::require(n_cells >= 2, "ssh_chain: n_cells must be >= 2");
  detail::require(delta > 0.0 && delta < 1.0, "ssh_chain: delta must be in (0,1)");
  const std::size_t n = 2 * static_cast<std::size_t>(n_cells);
  ModelPair m{Operator(n), Operator(n), SiteMap::linear("chain", n), {}};
  detail::flag_delta_edges(delta, m.warnings);
  for (std::size_t l = 1; l < n; ++l) {
    const double t = 0.5 * (1.0 + (l % 2 == 0 ? delta : -delta));
    m.h0.add_hermitian_pair(l - 1, l, t);
  }
  if (kappa != cplx{}) m.hp.add(0, n - 1, kappa);
  return m;
}

/// M coupled SSH rows on a cylinder (rows periodic). Site (row j, column l) ->
/// (j-1) * 2N + (l-1). Hp = kappa c^dag_{1,1} c_{M,1}.
inline ModelPair build_ssh_cylinder(const SshCylinderSpec& s) {
  detail::require(s.m_rows >= 2 && s.m_rows % 2 == 0, "ssh_cylinder: m_rows must be even and >= 2");
  detail::require(s.n_cells >= 1, "ssh_cylinder: n_cells must be >= 1");
  detail::require(s.delta > 0.0 && s.delta < 1.0, "ssh_cylinder: delta must be in (0,1)");
  const std::size_t rows = s.m_rows, cols = 2 * static_cast<std::size_t>(s.n_cells);
  auto map = std::make_shared<const SiteMap>(SiteMap{"cylinder", "row", "col", rows, cols});
  ModelPair m{Operator(rows * cols), Operator(rows * cols), map, {}};
  detail::flag_delta_edges(s.delta, m.warnings);
  for (std::size_t j = 1; j <= rows; ++j) {
    for (std::size_t l = 1; l < cols; ++l) {
      const double t = s.bond_prefactor * (1.0 + (l % 2 == 0 ? s.delta : -s.delta));
      m.h0.add_hermitian_pair(map->index(j, l), map->index(j, l + 1), t);
    }
    if (s.j_inter != 0.0) {
      const std::size_t next = j % rows + 1;
      for (std::size_t l = 1; l <= cols; ++l)
        m.h0.add_hermitian_pair(map->index(j, l), map->index(next, l), s.j_inter);
    }
  }
  if (s.kappa != cplx{}) m.hp.add(map->index(1, 1), map->index(rows, 1), s.kappa);
  return m;
}

/// H0 = eps0 * I on two sites, Hp = kappa at (1, 2).
inline ModelPair build_two_site(cplx kappa, double eps0) {
  ModelPair m{Operator(2), Operator(2), std::make_shared<const SiteMap>(SiteMap{"pair", "site", "", 2, 1}), {}};
  if (eps0 != 0.0) {
    m.h0.add(0, 0, eps0);
    m.h0.add(1, 1, eps0);
  }
  if (kappa != cplx{}) m.hp.add(0, 1, kappa);
  return m;
}

inline ModelPair build(const ModelSpec& spec) {
  return std::visit(
      overloaded{
          [](const RingSpec& s) { return build_ring(s.n_half); },
          [](const RingWithHopSpec& s) { return build_ring_with_hop(s); },
          [](const KspaceRingSpec& s) { return build_kspace_ring(s.n_sites, s.kappa); },
          [](const LadderSpec& s) { return build_ladder(s.n_rungs, s.j, s.n_max); },
          [](const SshChainSpec& s) { return build_ssh_chain(s.n_cells, s.delta, s.kappa); },
          [](const SshCylinderSpec& s) { return build_ssh_cylinder(s); },
          [](const TwoSiteSpec& s) { return build_two_site(s.kappa, s.eps0); },
      },
      spec);
}

}  // namespace coalesce::models
