#pragma once

#include <complex>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "coalesce/numkit/sparse.hpp"
#include "coalesce/overloaded.hpp"

namespace coalesce::models {

using numkit::cplx;
using numkit::CVector;
using Operator = numkit::SparseOperator;

/// Bijection between 1-based lattice coordinates (c0, c1) and 0-based matrix
/// indices: index = (c0 - 1) * extent1 + (c1 - 1). One-dimensional lattices
/// use extent1 = 1.
struct SiteMap {
  std::string layout;  // "ring", "chain", "ladder", "cylinder", "pair"
  std::string axis0;
  std::string axis1;
  std::size_t extent0 = 0;
  std::size_t extent1 = 1;

  std::size_t size() const noexcept { return extent0 * extent1; }
  bool periodic() const noexcept { return layout == "ring"; }

  std::size_t index(std::size_t c0, std::size_t c1 = 1) const {
    if (c0 < 1 || c0 > extent0 || c1 < 1 || c1 > extent1)
      throw InvalidSpec("SiteMap(" + layout + "): coordinate (" + std::to_string(c0) + ", " +
                        std::to_string(c1) + ") out of range");
    return (c0 - 1) * extent1 + (c1 - 1);
  }

  std::pair<std::size_t, std::size_t> coords(std::size_t idx) const {
    if (idx >= size()) throw InvalidSpec("SiteMap: index out of range");
    return {idx / extent1 + 1, idx % extent1 + 1};
  }

  static std::shared_ptr<const SiteMap> linear(std::string layout, std::size_t n) {
    return std::make_shared<const SiteMap>(SiteMap{std::move(layout), "site", "", n, 1});
  }
};

/// Complex amplitudes over the sites of a lattice. Normalisation is explicit.
struct StateVector {
  CVector amplitudes;
  std::shared_ptr<const SiteMap> site_map;

  std::size_t dim() const noexcept { return amplitudes.size(); }
  double norm() const { return numkit::norm2(amplitudes); }
  StateVector normalized() const { return {numkit::normalized(amplitudes), site_map}; }
  const cplx& operator[](std::size_t i) const { return amplitudes[i]; }
};

// ---- model specifications -------------------------------------------------
// Site labels inside specs (l0) are 1-based, as in the lattice notation.

struct RingSpec {
  int n_half = 2;  // ring has 2 * n_half sites
};

struct RingWithHopSpec {
  int n_half = 2;
  int l0 = 1;
  int r = 1;
  cplx kappa = 0.0;
};

struct KspaceRingSpec {
  int n_sites = 4;
  cplx kappa = 0.0;
};

struct LadderSpec {
  int n_rungs = 2;
  double j = 0.0;
  int n_max = 1;
};

struct SshChainSpec {
  int n_cells = 2;  // chain has 2 * n_cells sites
  double delta = 0.5;
  cplx kappa = 0.0;
};

struct SshCylinderSpec {
  int m_rows = 2;
  int n_cells = 2;  // each row has 2 * n_cells sites
  double delta = 0.5;
  double j_inter = 1.0;
  cplx kappa = 0.0;
  // Multiplies every intra-row bond. 1 gives (1 +- delta) bonds;
  // 0.5 gives the chain's (1 +- delta)/2 convention.
  double bond_prefactor = 1.0;
};

struct TwoSiteSpec {
  cplx kappa = 0.0;
  double eps0 = 0.0;
};

using ModelSpec = std::variant<RingSpec, RingWithHopSpec, KspaceRingSpec, LadderSpec,
                               SshChainSpec, SshCylinderSpec, TwoSiteSpec>;

inline std::string family_name(const ModelSpec& spec) {
  struct V {
    std::string operator()(const RingSpec&) const { return "ring"; }
    std::string operator()(const RingWithHopSpec&) const { return "ring_with_hop"; }
    std::string operator()(const KspaceRingSpec&) const { return "kspace_ring"; }
    std::string operator()(const LadderSpec&) const { return "ladder"; }
    std::string operator()(const SshChainSpec&) const { return "ssh_chain"; }
    std::string operator()(const SshCylinderSpec&) const { return "ssh_cylinder"; }
    std::string operator()(const TwoSiteSpec&) const { return "two_site"; }
  };
  return std::visit(V{}, spec);
}

/// Non-Hermitian strength of a spec (kappa, or J for the ladder).
inline cplx non_hermitian_strength(const ModelSpec& spec) {
  return std::visit(overloaded{[](const RingSpec&) { return cplx{}; },
                               [](const LadderSpec& s) { return cplx{s.j}; },
                               [](const auto& s) { return cplx{s.kappa}; }},
                    spec);
}

/// Copy of `spec` with the non-Hermitian strength replaced.
inline ModelSpec with_strength(ModelSpec spec, cplx strength) {
  std::visit(overloaded{[](RingSpec&) {
                          throw InvalidSpec("plain ring has no non-Hermitian strength to sweep");
                        },
                        [&](LadderSpec& s) { s.j = strength.real(); },
                        [&](auto& s) { s.kappa = strength; }},
             spec);
  return spec;
}

/// H = H0 + Hp with H0 Hermitian by construction.
struct ModelPair {
  Operator h0;
  Operator hp;
  std::shared_ptr<const SiteMap> site_map;
  std::vector<std::string> warnings;

  std::size_t dim() const noexcept { return h0.dim(); }

  Operator hamiltonian() const {
    Operator h = h0;
    h.append(hp);
    return h;
  }
  numkit::ComplexMatrix dense() const { return hamiltonian().to_dense(); }
};

}  // namespace coalesce::models
