#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "coalesce/models.hpp"
#include "coalesce/numkit.hpp"

namespace coalesce::dynamics {

using models::ModelPair;
using models::StateVector;
using numkit::cplx;
using numkit::CVector;

enum class Method { FixedStepRk4, DenseExpm };

inline const char* to_string(Method m) { return m == Method::FixedStepRk4 ? "FIXED_STEP_RK4" : "DENSE_EXPM"; }

inline constexpr std::size_t kDenseExpmMaxDim = 512;
inline constexpr double kMaxSteps = 1e9;

struct PropagationConfig {
  double dt = 0.0;  // 0 picks 0.1 / ||H||_1
  Method method = Method::FixedStepRk4;
  bool renormalize_internally = false;
};

struct Snapshot {
  double t = 0.0;
  StateVector state;                  // raw, unnormalised
  std::vector<double> probabilities;  // |psi_i|^2 / ||psi||^2
  double norm = 0.0;
  std::optional<double> fidelity;     // against the optional target
};

struct EvolutionTrace {
  std::vector<Snapshot> snapshots;
  double dt = 0.0;
  std::size_t steps = 0;
  Method method = Method::FixedStepRk4;
};

/// |<target | psi / ||psi||>|.
inline double fidelity(std::span<const cplx> target, std::span<const cplx> psi) {
  const double n = numkit::norm2(psi);
  if (!(n > 0.0)) throw std::domain_error("fidelity: zero-norm state");
  return std::abs(numkit::inner(target, psi)) / n;
}

namespace detail {

inline Snapshot make_snapshot(double t, const CVector& psi, const std::shared_ptr<const models::SiteMap>& map,
                              const std::optional<StateVector>& target) {
  Snapshot s;
  s.t = t;
  s.state = {psi, map};
  s.norm = numkit::norm2(psi);
  s.probabilities.resize(psi.size());
  const double inv = s.norm > 0.0 ? 1.0 / (s.norm * s.norm) : 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i) s.probabilities[i] = std::norm(psi[i]) * inv;
  if (target && s.norm > 0.0) s.fidelity = fidelity(target->amplitudes, psi);
  return s;
}

// y' = -i H y, one classical RK4 step.
class Rk4Stepper {
 public:
  explicit Rk4Stepper(const numkit::SparseOperator& h) : h_(h), k_(h.dim()), tmp_(h.dim()), acc_(h.dim()) {}

  void step(CVector& y, double dt) {
    const cplx mi{0.0, -1.0};
    auto deriv = [&](const CVector& x) {
      h_.apply_into(x, k_);
      for (auto& v : k_) v *= mi;
    };
    const std::size_t n = y.size();
    deriv(y);
    for (std::size_t i = 0; i < n; ++i) {
      acc_[i] = k_[i];
      tmp_[i] = y[i] + 0.5 * dt * k_[i];
    }
    deriv(tmp_);
    for (std::size_t i = 0; i < n; ++i) {
      acc_[i] += 2.0 * k_[i];
      tmp_[i] = y[i] + 0.5 * dt * k_[i];
    }
    deriv(tmp_);
    for (std::size_t i = 0; i < n; ++i) {
      acc_[i] += 2.0 * k_[i];
      tmp_[i] = y[i] + dt * k_[i];
    }
    deriv(tmp_);
    for (std::size_t i = 0; i < n; ++i) y[i] += (dt / 6.0) * (acc_[i] + k_[i]);
  }

 private:
  const numkit::SparseOperator& h_;
  CVector k_, tmp_, acc_;
};

}  // namespace detail

/// Integrates d psi/dt = -i (H0 + Hp) psi from t = 0 and records a snapshot at
/// every requested time. Steps are shortened so each snapshot time is hit exactly.
inline EvolutionTrace evolve(const ModelPair& model, const StateVector& psi0, const std::vector<double>& times,
                             const PropagationConfig& cfg = {}, const std::optional<StateVector>& target = {}) {
  const std::size_t n = model.dim();
  if (psi0.dim() != n)
    throw DimensionMismatch("evolve: psi0 has " + std::to_string(psi0.dim()) + " amplitudes, model has " +
                            std::to_string(n) + " sites");
  if (target && target->dim() != n) throw DimensionMismatch("evolve: target dimension differs from model");
  if (!(std::abs(psi0.norm() - 1.0) <= 1e-8)) throw InvalidSpec("evolve: psi0 must be unit norm");
  if (times.empty()) throw InvalidSpec("evolve: times must be nonempty");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] >= 0.0) || !std::isfinite(times[i])) throw InvalidSpec("evolve: times must be finite and >= 0");
    if (i > 0 && !(times[i] > times[i - 1])) throw InvalidSpec("evolve: times must be strictly increasing");
  }

  const auto h = model.hamiltonian();
  for (const auto& t : h.triplets())
    if (!std::isfinite(t.value.real()) || !std::isfinite(t.value.imag()))
      throw InvalidSpec("evolve: Hamiltonian has non-finite entries");
  const double bound = h.spectral_norm_bound();
  EvolutionTrace trace;
  trace.method = cfg.method;
  if (!(cfg.dt >= 0.0) || !std::isfinite(cfg.dt)) throw ConfigurationError("evolve: dt must be > 0");
  trace.dt = cfg.dt > 0.0 ? cfg.dt : (bound > 0.0 ? 0.1 / std::max(h.norm1(), bound) : 1.0);
  if (cfg.method == Method::FixedStepRk4 && trace.dt * bound > 0.5)
    throw ConfigurationError("evolve: dt * ||H|| = " + std::to_string(trace.dt * bound) +
                             " exceeds the RK4 stability limit 0.5");
  if (cfg.method == Method::FixedStepRk4 && times.back() / trace.dt > kMaxSteps)
    throw ConfigurationError("evolve: reaching t = " + std::to_string(times.back()) + " needs more than " +
                             std::to_string(static_cast<long>(kMaxSteps)) + " steps");
  if (cfg.method == Method::DenseExpm && n > kDenseExpmMaxDim)
    throw ConfigurationError("evolve: DENSE_EXPM is limited to dim <= " + std::to_string(kDenseExpmMaxDim));

  const auto& map = psi0.site_map ? psi0.site_map : model.site_map;
  CVector psi = psi0.amplitudes;
  double t = 0.0, last_good = 0.0;
  detail::Rk4Stepper rk4(h);
  std::optional<numkit::ComplexMatrix> dense;
  std::map<double, numkit::ComplexMatrix> propagators;  // keyed by gap
  if (cfg.method == Method::DenseExpm) dense = h.to_dense();

  for (double target_t : times) {
    const double gap = target_t - t;
    if (gap > 0.0) {
      if (cfg.method == Method::FixedStepRk4) {
        const auto steps = static_cast<std::size_t>(std::ceil(gap / trace.dt * (1.0 - 1e-12)));
        const double h_step = gap / static_cast<double>(steps);
        for (std::size_t s = 0; s < steps; ++s) {
          rk4.step(psi, h_step);
          if (cfg.renormalize_internally) psi = numkit::normalized(std::move(psi));
          if (!numkit::all_finite(psi))
            throw IntegrationFailure("evolve: non-finite amplitude after t = " + std::to_string(last_good),
                                     last_good);
          last_good = t + h_step * static_cast<double>(s + 1);
        }
        trace.steps += steps;
      } else {
        auto it = propagators.find(gap);
        if (it == propagators.end()) it = propagators.emplace(gap, numkit::expm(*dense * cplx{0.0, -gap})).first;
        psi = it->second * std::span<const cplx>(psi);
        if (cfg.renormalize_internally) psi = numkit::normalized(std::move(psi));
        if (!numkit::all_finite(psi))
          throw IntegrationFailure("evolve: non-finite amplitude after t = " + std::to_string(last_good), last_good);
        ++trace.steps;
      }
    }
    t = target_t;
    last_good = t;
    trace.snapshots.push_back(detail::make_snapshot(t, psi, map, target));
  }
  return trace;
}

/// (t, F) with F = |<target | psi(t) / ||psi(t)||>|.
inline std::vector<std::pair<double, double>> fidelity_series(const EvolutionTrace& trace, const StateVector& target) {
  if (!(std::abs(target.norm() - 1.0) <= 1e-8)) throw InvalidSpec("fidelity_series: target must be unit norm");
  std::vector<std::pair<double, double>> out;
  for (const auto& s : trace.snapshots) {
    if (s.state.dim() != target.dim()) throw DimensionMismatch("fidelity_series: target dimension differs");
    if (!(s.norm > 0.0)) throw IntegrationFailure("fidelity_series: zero-norm snapshot", s.t);
    out.emplace_back(s.t, fidelity(target.amplitudes, s.state.amplitudes));
  }
  return out;
}

/// e^{-i eps0 t} (psi0 - i kappa t psi0[1] e_0): exact, since (c1^dag c2)^2 = 0.
inline StateVector two_site_exact(cplx kappa, double eps0, double t, const CVector& psi0) {
  if (psi0.size() != 2) throw DimensionMismatch("two_site_exact: psi0 must have 2 amplitudes");
  const cplx phase = std::polar(1.0, -eps0 * t);
  CVector out{phase * (psi0[0] - cplx{0.0, 1.0} * kappa * t * psi0[1]), phase * psi0[1]};
  return {std::move(out), models::build_two_site(kappa, eps0).site_map};
}

/// (M/2)^{-1/2} sum_j |2j-1, 1>: odd rows, first column.
inline StateVector stripe_initial_state(int m_rows, int n_cells) {
  if (m_rows < 2 || m_rows % 2 != 0) throw InvalidSpec("stripe_initial_state: m_rows must be even and >= 2");
  if (n_cells < 1) throw InvalidSpec("stripe_initial_state: n_cells must be >= 1");
  const std::size_t rows = m_rows, cols = 2 * static_cast<std::size_t>(n_cells);
  auto map = std::make_shared<const models::SiteMap>(models::SiteMap{"cylinder", "row", "col", rows, cols});
  StateVector s{CVector(rows * cols), map};
  const double amp = 1.0 / std::sqrt(0.5 * m_rows);
  for (std::size_t j = 1; j <= rows / 2; ++j) s.amplitudes[map->index(2 * j - 1, 1)] = amp;
  return s;
}

}  // namespace coalesce::dynamics
