#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "coalesce/models.hpp"
#include "coalesce/numkit.hpp"
#include "coalesce/spectra.hpp"

namespace coalesce::theorem {

using numkit::cplx;
using numkit::CVector;
using models::Operator;
using models::StateVector;

enum class Verdict { Holds, HoldsAsymptotically, Fails };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Holds: return "HOLDS";
    case Verdict::HoldsAsymptotically: return "HOLDS_ASYMPTOTICALLY";
    case Verdict::Fails: return "FAILS";
  }
  return "?";
}

struct TheoremReport {
  double residual_H0A = 0.0;  // ||H0 A - E A||
  double residual_H0B = 0.0;  // ||H0 B - conj(E) B||
  double residual_HpA = 0.0;  // ||Hp A||
  double residual_HpdB = 0.0; // ||Hp^dag B||
  cplx overlap_AB;            // <B|A>
  cplx energy;
  bool energy_estimated = false;
  double tol = 0.0;
  std::optional<double> declared_scale;

  bool hypotheses_hold = false;
  bool conclusion_checked = false;
  bool conclusion_holds = false;
  // filled when the conclusion was checked
  std::optional<spectra::Classification> cluster_class;
  std::optional<cplx> cluster_energy;
  std::optional<double> coalescing_distance;
  std::string note;

  Verdict verdict = Verdict::Fails;

  double max_residual() const {
    return std::max({residual_H0A, residual_H0B, residual_HpA, residual_HpdB});
  }
};

struct CheckOptions {
  std::optional<cplx> energy;  // default: Rayleigh quotient <A|H0|A>
  double tol = 1e-8;
  // Finite-size bound on the residuals; enables HOLDS_ASYMPTOTICALLY.
  std::optional<double> finite_size_scale;
  spectra::Tolerances spectral{};
  // Dense EP confirmation is skipped above this dimension.
  std::size_t max_conclusion_dim = 2000;
};

namespace detail {

inline void require_unit(std::span<const cplx> v, const char* name) {
  const double n = numkit::norm2(v);
  if (!(std::abs(n - 1.0) <= 1e-8))
    throw InvalidSpec(std::string("check_transition: ") + name + " must be unit norm (got " + std::to_string(n) + ")");
}

inline double shifted_residual(const Operator& h, std::span<const cplx> v, cplx e) {
  auto hv = numkit::apply(h, v);
  for (std::size_t i = 0; i < hv.size(); ++i) hv[i] -= e * v[i];
  return numkit::norm2(hv);
}

}  // namespace detail

/// Checks the DP -> EP hypotheses for (H0, Hp, A, B) and, when they hold
/// exactly, confirms the EP with a full spectral classification of H0 + Hp.
inline TheoremReport check_transition(const Operator& h0, const Operator& hp, std::span<const cplx> a,
                                      std::span<const cplx> b, const CheckOptions& opt = {}) {
  const std::size_t n = h0.dim();
  if (hp.dim() != n || a.size() != n || b.size() != n)
    throw DimensionMismatch("check_transition: H0 is " + std::to_string(n) + "-dimensional but Hp, A, B are " +
                            std::to_string(hp.dim()) + ", " + std::to_string(a.size()) + ", " +
                            std::to_string(b.size()));
  if (!(opt.tol > 0.0)) throw InvalidSpec("check_transition: tol must be > 0");
  detail::require_unit(a, "A");
  detail::require_unit(b, "B");

  TheoremReport r;
  r.tol = opt.tol;
  r.declared_scale = opt.finite_size_scale;
  if (opt.energy) {
    r.energy = *opt.energy;
  } else {
    r.energy = numkit::inner(a, numkit::apply(h0, a));
    r.energy_estimated = true;
  }
  if (!std::isfinite(r.energy.real()) || !std::isfinite(r.energy.imag()))
    throw InvalidSpec("check_transition: E must be finite");

  r.residual_H0A = detail::shifted_residual(h0, a, r.energy);
  r.residual_H0B = detail::shifted_residual(h0, b, std::conj(r.energy));
  r.residual_HpA = numkit::norm2(numkit::apply(hp, a));
  r.residual_HpdB = numkit::norm2(numkit::apply(hp.adjoint(), b));
  r.overlap_AB = numkit::inner(b, a);

  const double overlap = std::abs(r.overlap_AB);
  r.hypotheses_hold = r.max_residual() <= opt.tol && overlap <= opt.tol;

  if (r.hypotheses_hold && n > opt.max_conclusion_dim) {
    r.note = "hypotheses hold; dense EP confirmation skipped (dim " + std::to_string(n) + " > " +
             std::to_string(opt.max_conclusion_dim) + ")";
  } else if (r.hypotheses_hold) {
    r.conclusion_checked = true;
    models::Operator h = h0;
    h.append(hp);
    const auto rep = spectra::classify(h.to_dense(), opt.spectral);
    const auto& c = rep.nearest(r.energy);
    r.cluster_class = c.classification;
    r.cluster_energy = c.representative;
    const double near = opt.spectral.cluster * rep.eigen.residual_scale();
    if (c.classification != spectra::Classification::EP) {
      r.note = std::string("cluster nearest E classifies ") + spectra::to_string(c.classification);
    } else if (std::abs(c.representative - r.energy) > near) {
      r.note = "EP cluster does not sit at E";
    } else {
      r.coalescing_distance = numkit::phase_aligned_distance(*c.coalescing_vector, a);
      r.conclusion_holds = *r.coalescing_distance <= 10.0 * opt.tol;
      if (!r.conclusion_holds) r.note = "coalescing vector differs from A";
    }
    r.verdict = r.conclusion_holds ? Verdict::Holds : Verdict::Fails;
    return r;
  }

  if (opt.finite_size_scale) {
    // residuals may carry rounding on top of the declared scale
    const double bound = *opt.finite_size_scale * (1.0 + 1e-9) + opt.tol;
    if (r.max_residual() <= bound && overlap <= bound) {
      r.verdict = Verdict::HoldsAsymptotically;
      return r;
    }
    r.note = "residuals exceed the declared finite-size scale";
  } else if (!r.hypotheses_hold) {
    r.note = "hypothesis residuals exceed tol";
  }
  r.verdict = Verdict::Fails;
  return r;
}

inline TheoremReport check_transition(const models::ModelPair& model, const StateVector& a, const StateVector& b,
                                      const CheckOptions& opt = {}) {
  return check_transition(model.h0, model.hp, a.amplitudes, b.amplitudes, opt);
}

/// 1-based site labels where |amplitude| <= tol * max |amplitude|.
inline std::vector<std::size_t> nodal_points(std::span<const cplx> state, double tol = 1e-10) {
  if (!(tol > 0.0)) throw InvalidSpec("nodal_points: tol must be > 0");
  double peak = 0.0;
  for (const auto& x : state) peak = std::max(peak, std::abs(x));
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < state.size(); ++i)
    if (std::abs(state[i]) <= tol * peak) out.push_back(i + 1);
  return out;
}

inline std::vector<std::size_t> nodal_points(const StateVector& s, double tol = 1e-10) {
  return nodal_points(s.amplitudes, tol);
}

/// Hops kappa a^dag_i a_j (1-based i, j) with a_j|A> = 0 and a_i|B> = 0.
inline std::vector<std::pair<std::size_t, std::size_t>> suggest_hops(const StateVector& a, const StateVector& b,
                                                                     double tol = 1e-10) {
  if (a.dim() != b.dim()) throw DimensionMismatch("suggest_hops: A and B differ in dimension");
  const auto nodes_a = nodal_points(a, tol);
  const auto nodes_b = nodal_points(b, tol);
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (auto i : nodes_b)
    for (auto j : nodes_a)
      if (i != j) out.emplace_back(i, j);
  return out;
}

}  // namespace coalesce::theorem
