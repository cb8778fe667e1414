#pragma once

#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include "coalesce/models/builders.hpp"

namespace coalesce::models {

/// Plane wave |k> = (2N)^{-1/2} sum_j e^{ikj} |j> on the 2N-site ring, j 1-based.
inline StateVector ring_momentum_state(int n_half, double k) {
  detail::require(n_half >= 2, "ring_momentum_state: n_half must be >= 2");
  const std::size_t n = 2 * static_cast<std::size_t>(n_half);
  StateVector s{CVector(n), SiteMap::linear("ring", n)};
  const double inv = 1.0 / std::sqrt(static_cast<double>(n));
  for (std::size_t j = 1; j <= n; ++j) s.amplitudes[j - 1] = std::polar(inv, k * static_cast<double>(j));
  return s;
}

/// Integer n with k = pi n / n_half (mod 2N), or throws if k is off the grid.
inline long ring_grid_index(int n_half, double k) {
  const double x = k * n_half / std::numbers::pi;
  const double rounded = std::round(x);
  detail::require(std::abs(x - rounded) <= 1e-9 * std::max(1.0, std::abs(x)),
                  "k = " + std::to_string(k) + " is not on the ring grid pi*n/" + std::to_string(n_half));
  return detail::wrap(static_cast<long>(rounded), 2L * n_half);
}

/// |psi_k^(+/-)> = (|k> +/- e^{2ik l0} |-k>) / sqrt 2. psi^- vanishes at l0;
/// psi^+ vanishes at l0 + r whenever cos(k r) = 0.
inline std::pair<StateVector, StateVector> ring_pair_states(int n_half, double k, int l0) {
  const long n = ring_grid_index(n_half, k);
  detail::require(n != 0 && n != n_half, "ring_pair_states: k = 0 and k = pi have no degenerate partner");
  const std::size_t sites = 2 * static_cast<std::size_t>(n_half);
  // evaluate phases from the exact integer grid index
  auto phase = [&](long m) {
    return std::polar(1.0, std::numbers::pi * static_cast<double>(detail::wrap(m, 2L * n_half)) / n_half);
  };
  const double inv = 1.0 / std::sqrt(2.0 * static_cast<double>(sites));
  StateVector plus{CVector(sites), SiteMap::linear("ring", sites)};
  StateVector minus{CVector(sites), plus.site_map};
  for (std::size_t j = 1; j <= sites; ++j) {
    const long jj = static_cast<long>(j);
    const cplx ek = phase(n * jj);
    const cplx twisted = phase(2 * n * l0 - n * jj);  // e^{2ik l0} e^{-ikj}
    plus.amplitudes[j - 1] = inv * (ek + twisted);
    minus.amplitudes[j - 1] = inv * (ek - twisted);
  }
  return {plus, minus};
}

/// k = (2m+1) pi / (2r) inside (0, pi).
inline std::vector<double> admissible_k(int r) {
  detail::require(r >= 1, "admissible_k: r must be >= 1");
  std::vector<double> ks;
  for (int m = 0; 2 * m + 1 < 2 * r; ++m) ks.push_back((2 * m + 1) * std::numbers::pi / (2.0 * r));
  return ks;
}

/// admissible_k(r) intersected with the ring grid pi n / n_half.
inline std::vector<double> admissible_k_on_grid(int r, int n_half) {
  std::vector<double> out;
  for (int m = 0; 2 * m + 1 < 2 * r; ++m) {
    // (2m+1) pi/(2r) = pi n / n_half  <=>  (2m+1) n_half = 2 r n
    const long num = static_cast<long>(2 * m + 1) * n_half;
    if (num % (2L * r) == 0) out.push_back(std::numbers::pi * static_cast<double>(num / (2L * r)) / n_half);
  }
  return out;
}

inline double ssh_rho(double delta) { return (delta - 1.0) / (delta + 1.0); }

/// Left/right SSH zero modes: |L> on odd sites with rho^{j-1}, |R> on even sites
/// with rho^{N-j}, both unit norm.
inline std::pair<StateVector, StateVector> ssh_edge_modes(int n_cells, double delta) {
  detail::require(n_cells >= 1, "ssh_edge_modes: n_cells must be >= 1");
  detail::require(delta > 0.0 && delta < 1.0, "ssh_edge_modes: delta must be in (0,1)");
  const double rho = ssh_rho(delta);
  const double omega = (1.0 - std::pow(rho, 2 * n_cells)) / (1.0 - rho * rho);
  const double inv = 1.0 / std::sqrt(omega);
  const std::size_t n = 2 * static_cast<std::size_t>(n_cells);
  StateVector left{CVector(n), SiteMap::linear("chain", n)};
  StateVector right{CVector(n), left.site_map};
  for (int j = 1; j <= n_cells; ++j) {
    left.amplitudes[2 * j - 2] = inv * std::pow(rho, j - 1);
    right.amplitudes[2 * j - 1] = inv * std::pow(rho, n_cells - j);
  }
  return {left, right};
}

/// ||H0 |L>|| for the open chain: ((1 - delta)/2) |rho|^{N-1} / sqrt(Omega).
inline double ssh_boundary_residual(int n_cells, double delta) {
  const double rho = ssh_rho(delta);
  const double omega = (1.0 - std::pow(rho, 2 * n_cells)) / (1.0 - rho * rho);
  return 0.5 * (1.0 - delta) * std::pow(std::abs(rho), n_cells - 1) / std::sqrt(omega);
}

/// Row profile of the cylinder edge modes. `Uniform` repeats one row pattern;
/// `Staggered` alternates the sign between consecutive rows of the same parity,
/// which makes the modes exact zero modes of the row ring when M % 4 == 0.
enum class RowProfile { Uniform, Staggered };

/// |L_e> on even rows and |L_o> on odd rows, odd columns 2l-1 with rho^{l-1}.
inline std::pair<StateVector, StateVector> cylinder_edge_modes(int m_rows, int n_cells, double delta,
                                                               RowProfile profile = RowProfile::Uniform) {
  detail::require(m_rows >= 2 && m_rows % 2 == 0, "cylinder_edge_modes: m_rows must be even and >= 2");
  detail::require(n_cells >= 1, "cylinder_edge_modes: n_cells must be >= 1");
  detail::require(delta > 0.0 && delta < 1.0, "cylinder_edge_modes: delta must be in (0,1)");
  const double rho = ssh_rho(delta);
  const double omega = 0.5 * m_rows * (1.0 - std::pow(rho, 2 * n_cells)) / (1.0 - rho * rho);
  const double inv = 1.0 / std::sqrt(omega);
  const std::size_t rows = m_rows, cols = 2 * static_cast<std::size_t>(n_cells);
  auto map = std::make_shared<const SiteMap>(SiteMap{"cylinder", "row", "col", rows, cols});
  StateVector even{CVector(rows * cols), map};
  StateVector odd{CVector(rows * cols), map};
  for (int j = 1; j <= m_rows / 2; ++j) {
    const double sign = (profile == RowProfile::Staggered && j % 2 == 0) ? -1.0 : 1.0;
    for (int l = 1; l <= n_cells; ++l) {
      const double amp = sign * inv * std::pow(rho, l - 1);
      even.amplitudes[map->index(2 * j, 2 * l - 1)] = amp;
      odd.amplitudes[map->index(2 * j - 1, 2 * l - 1)] = amp;
    }
  }
  return {even, odd};
}

/// Residual of the cylinder edge mode at the far column when the rows are
/// decoupled: bond_prefactor (1 - delta) |rho|^{N-1} sqrt(M/2) / sqrt(Omega).
inline double cylinder_boundary_residual(int m_rows, int n_cells, double delta, double bond_prefactor = 1.0) {
  const double rho = ssh_rho(delta);
  const double omega = 0.5 * m_rows * (1.0 - std::pow(rho, 2 * n_cells)) / (1.0 - rho * rho);
  return bond_prefactor * (1.0 - delta) * std::pow(std::abs(rho), n_cells - 1) *
         std::sqrt(0.5 * m_rows) / std::sqrt(omega);
}

}  // namespace coalesce::models
