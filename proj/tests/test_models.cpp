#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "coalesce/models.hpp"
#include "coalesce/numkit.hpp"

namespace {

using namespace coalesce::models;
using coalesce::InvalidSpec;
using coalesce::numkit::ComplexMatrix;
using coalesce::numkit::eig_full;
using coalesce::numkit::numerical_rank;
namespace numkit = coalesce::numkit;
constexpr double pi = std::numbers::pi;

std::vector<double> sorted_real(const CVector& v) {
  std::vector<double> out;
  for (const auto& x : v) out.push_back(x.real());
  std::sort(out.begin(), out.end());
  return out;
}

// multiset distance after sorting by real part then imaginary part
double sorted_gap(CVector a, CVector b) {
  auto less = [](const cplx& x, const cplx& y) {
    return std::abs(x.real() - y.real()) > 1e-7 ? x.real() < y.real() : x.imag() < y.imag();
  };
  std::sort(a.begin(), a.end(), less);
  std::sort(b.begin(), b.end(), less);
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

CVector plane_wave(std::size_t n, double k) {
  CVector v(n);
  for (std::size_t j = 1; j <= n; ++j) v[j - 1] = std::polar(1.0 / std::sqrt(double(n)), k * double(j));
  return v;
}

std::vector<ModelSpec> hermitian_specs() {
  return {RingSpec{6},
          RingWithHopSpec{6, 1, 1, 0.0},
          KspaceRingSpec{12, 0.0},
          LadderSpec{10, 0.0, 3},
          SshChainSpec{8, 0.3, 0.0},
          SshCylinderSpec{4, 5, 0.3, 0.7, 0.0},
          TwoSiteSpec{0.0, 0.4}};
}

TEST(BuildRing, FourSites) {
  const auto m = build_ring(2);
  ASSERT_EQ(m.dim(), 4u);
  EXPECT_TRUE(m.hp.empty());
  const auto ev = sorted_real(eig_full(m.dense()).eigenvalues);
  std::vector<double> oracle;
  for (int n = 1; n <= 4; ++n) oracle.push_back(2.0 * std::cos(pi * n / 2.0));
  std::sort(oracle.begin(), oracle.end());
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(ev[i], oracle[i], 1e-12);
}

TEST(BuildRing, TwelveSitesHasFiveDegeneratePairs) {
  const auto ev = sorted_real(eig_full(build_ring(6).dense()).eigenvalues);
  int pairs = 0;
  for (std::size_t i = 0; i + 1 < ev.size(); ++i)
    if (std::abs(ev[i] - ev[i + 1]) < 1e-9) ++pairs;
  EXPECT_EQ(pairs, 5);
}

TEST(BuildRing, RowSumsAreTwo) {
  for (int nh = 2; nh <= 10; ++nh) {
    const auto h = build_ring(nh).dense();
    for (std::size_t i = 0; i < h.dim(); ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < h.dim(); ++j) s += std::abs(h(i, j));
      EXPECT_EQ(s, 2.0);
    }
  }
}

TEST(BuildRing, RejectsTooSmall) { EXPECT_THROW(build_ring(1), InvalidSpec); }

TEST(Models, HermitianPartIsExactlySelfAdjoint) {
  std::vector<ModelSpec> specs = hermitian_specs();
  specs.push_back(RingWithHopSpec{6, 3, 2, 0.7});
  specs.push_back(KspaceRingSpec{12, 1.0});
  specs.push_back(LadderSpec{10, 0.8, 3});
  specs.push_back(SshCylinderSpec{4, 5, 0.3, 0.7, 0.5});
  for (const auto& s : specs) {
    const auto h0 = build(s).h0.to_dense();
    EXPECT_EQ(h0, h0.adjoint()) << family_name(s);
  }
}

TEST(AttachUnidirectional, SingleEntry) {
  const auto m = attach_unidirectional(build_ring(6), 1, 1, 0.5);
  const auto hp = m.hp.to_dense();
  int nonzero = 0;
  for (std::size_t i = 0; i < 12; ++i)
    for (std::size_t j = 0; j < 12; ++j) nonzero += hp(i, j) != cplx{};
  EXPECT_EQ(nonzero, 1);
  EXPECT_EQ(hp(0, 1), cplx(0.5));
  EXPECT_EQ(m.h0.to_dense(), build_ring(6).h0.to_dense());
}

TEST(AttachUnidirectional, ZeroKappaLeavesHpEmpty) {
  const auto m = attach_unidirectional(build_ring(6), 1, 1, 0.0);
  EXPECT_EQ(m.hp.to_dense(), ComplexMatrix(12));
  EXPECT_EQ(m.dense(), m.h0.to_dense());
}

TEST(AttachUnidirectional, WrapsOnRing) {
  const auto hp = attach_unidirectional(build_ring(6), 12, 1, 0.5).hp.to_dense();
  EXPECT_EQ(hp(11, 0), cplx(0.5));
}

TEST(AttachUnidirectional, ChainOutOfRangeThrows) {
  const auto chain = build_ssh_chain(4, 0.3, 0.0);
  EXPECT_THROW(attach_unidirectional(chain, 8, 1, 0.5), InvalidSpec);
  EXPECT_NO_THROW(attach_unidirectional(chain, 1, 7, 0.5));
}

TEST(RingPairStates, NodalPointsAtPiOverTwo) {
  const auto [plus, minus] = ring_pair_states(6, pi / 2, 1);
  EXPECT_EQ(std::abs(minus[0]), 0.0);
  EXPECT_LE(std::abs(plus[1]), 1e-15);
}

TEST(RingPairStates, OrthogonalEigenvectorsOnTheGrid) {
  const auto ring = build_ring(6);
  for (int n = 1; n < 6; ++n)
    for (int l0 : {1, 4, 12}) {
      const double k = pi * n / 6.0;
      const auto [plus, minus] = ring_pair_states(6, k, l0);
      EXPECT_LE(std::abs(numkit::inner(plus.amplitudes, minus.amplitudes)), 1e-14);
      EXPECT_NEAR(plus.norm(), 1.0, 1e-14);
      for (const auto* s : {&plus, &minus}) {
        auto hv = numkit::apply(ring.h0, s->amplitudes);
        for (std::size_t i = 0; i < hv.size(); ++i) hv[i] -= 2.0 * std::cos(k) * s->amplitudes[i];
        EXPECT_LE(numkit::norm2(hv), 1e-12);
      }
      EXPECT_LE(std::abs(minus[l0 - 1]), 1e-15);
    }
}

TEST(RingPairStates, PlusNodeOnlyWhenCosineVanishes) {
  for (int r = 1; r <= 5; ++r)
    for (int n = 1; n < 6; ++n) {
      const double k = pi * n / 6.0;
      const auto [plus, minus] = ring_pair_states(6, k, 1);
      const bool node = std::abs(plus[static_cast<std::size_t>(r)]) <= 1e-12;
      EXPECT_EQ(node, std::abs(std::cos(k * r)) <= 1e-12) << "r=" << r << " n=" << n;
    }
}

TEST(RingPairStates, RejectsOffGridAndEndpoints) {
  EXPECT_THROW(ring_pair_states(6, 0.3, 1), InvalidSpec);
  EXPECT_THROW(ring_pair_states(6, 0.0, 1), InvalidSpec);
  EXPECT_THROW(ring_pair_states(6, pi, 1), InvalidSpec);
}

TEST(AdmissibleK, Examples) {
  const auto k1 = admissible_k(1);
  ASSERT_EQ(k1.size(), 1u);
  EXPECT_DOUBLE_EQ(k1[0], pi / 2);
  const auto k2 = admissible_k(2);
  ASSERT_EQ(k2.size(), 2u);
  EXPECT_DOUBLE_EQ(k2[0], pi / 4);
  EXPECT_DOUBLE_EQ(k2[1], 3 * pi / 4);
  const auto k3 = admissible_k_on_grid(3, 6);
  ASSERT_EQ(k3.size(), 3u);
  EXPECT_DOUBLE_EQ(k3[0], pi / 6);
  EXPECT_DOUBLE_EQ(k3[1], pi / 2);
  EXPECT_DOUBLE_EQ(k3[2], 5 * pi / 6);
  EXPECT_TRUE(admissible_k_on_grid(2, 6).empty());
}

TEST(KspaceRing, MomentumActionOfHp) {
  for (int n : {12, 13, 20}) {
    const double kappa = 1.0;
    const auto m = build_kspace_ring(n, kappa);
    for (int q = 1; 2 * q < n; ++q) {
      const double k = 2 * pi * q / n;
      const auto kp = plane_wave(n, k), km = plane_wave(n, -k);
      EXPECT_LE(numkit::norm2(numkit::apply(m.hp, kp)), 1e-12);
      EXPECT_LE(numkit::distance(numkit::apply(m.hp, km), numkit::scaled(kappa, kp)), 1e-12);
    }
  }
}

TEST(KspaceRing, AllDegeneratePairsBecomeDefective) {
  const auto es = eig_full(build_kspace_ring(12, 1.0).dense());
  for (int q = 1; q < 6; ++q) {
    const double e = 2 * std::cos(2 * pi * q / 12);
    std::vector<CVector> vecs;
    for (std::size_t i = 0; i < es.dim(); ++i)
      if (std::abs(es.eigenvalues[i] - e) < 1e-6) vecs.push_back(es.right_vectors[i]);
    ASSERT_EQ(vecs.size(), 2u) << "q=" << q;
    EXPECT_EQ(numerical_rank(vecs, 1e-6), 1u) << "q=" << q;
  }
}

TEST(KspaceRing, CotApproximationAtLargeN) {
  const double c = cot_coupling(200, 1);
  EXPECT_LE(std::abs(c - 1.0 / pi) / (1.0 / pi), 2e-4);
}

TEST(KspaceRing, CotDiagnosticMatchesOddEntries) {
  // on l + j odd the closed-form cot coupling is exact; elsewhere it is not
  const int n = 12;
  const auto exact = build_kspace_ring(n, 1.0).hp.to_dense();
  const auto cot = build_kspace_ring_cot(n, 1.0).hp.to_dense();
  for (int l = 1; l <= n; ++l)
    for (int j = 1; j <= n; ++j)
      if ((l + j) % 2 == 1) EXPECT_LE(std::abs(exact(l - 1, j - 1) - cot(l - 1, j - 1)), 1e-13);
  EXPECT_GT(kspace_cot_mismatch(n, 1.0), 0.1);
}

TEST(BuildLadder, HermitianLimitSpectrum) {
  const int n = 10;
  CVector oracle;
  for (int q = 0; q < n; ++q) {
    const double k = 2 * pi * q / n;
    oracle.push_back(2 * std::cos(k) + 1.0);
    oracle.push_back(2 * std::cos(k) - 1.0);
  }
  const auto m = build_ladder(n, 0.0, 3);
  EXPECT_TRUE(m.hp.empty());
  EXPECT_LE(sorted_gap(eig_full(m.dense()).eigenvalues, oracle), 1e-10);
}

TEST(BuildLadder, EntryCountSingleTerm) {
  const auto hp = build_ladder(8, 1.0, 1).hp.to_dense();
  int nonzero = 0;
  for (std::size_t i = 0; i < hp.dim(); ++i)
    for (std::size_t j = 0; j < hp.dim(); ++j) nonzero += std::abs(hp(i, j)) > 0.0;
  EXPECT_EQ(nonzero, 4 * 8);
}

TEST(BuildLadder, CapsSeriesLength) {
  const auto m = build_ladder(8, 1.0, 9);
  ASSERT_EQ(m.warnings.size(), 1u);
  EXPECT_EQ(m.hp.to_dense(), build_ladder(8, 1.0, 4).hp.to_dense());
}

TEST(BuildLadder, MatchesBlochSpectrum) {
  struct Case {
    int n;
    double j;
    int n_max;
    double tol;
  };
  for (const auto& c : {Case{16, 0.0, 4, 1e-10}, Case{16, 0.5, 8, 1e-8}, Case{64, 0.5, 16, 1e-8},
                        Case{24, 0.9, 5, 1e-8}}) {
    CVector oracle;
    for (int q = 0; q < c.n; ++q) {
      const double k = 2 * pi * q / c.n;
      double d = 0.0;
      for (int t = 1; t <= c.n_max; ++t) d += std::sin((2 * t - 1) * k) / (2 * t - 1);
      d *= c.j;
      const cplx root = std::sqrt(cplx(1.0 - d * d));
      oracle.push_back(2 * std::cos(k) + root);
      oracle.push_back(2 * std::cos(k) - root);
    }
    const auto es = eig_full(build_ladder(c.n, c.j, c.n_max).dense());
    EXPECT_LE(sorted_gap(es.eigenvalues, oracle), c.tol) << "N=" << c.n << " J=" << c.j;
  }
}

TEST(LadderBloch, StepLimitCoalescesAtCriticalCoupling) {
  const auto b = ladder_bloch(pi / 2, 4 / pi, SeriesCutoff::infinite());
  EXPECT_EQ(b.delta, 1.0);
  EXPECT_LE(std::abs(b.eps_plus), 1e-15);
  EXPECT_LE(std::abs(b.eps_minus), 1e-15);
  const auto es = eig_full(b.h);
  EXPECT_EQ(numerical_rank(es.right_vectors, 1e-6), 1u);
}

TEST(LadderBloch, ZeroMomentum) {
  for (double j : {0.0, 0.7, 3.0}) {
    const auto b = ladder_bloch(0.0, j, SeriesCutoff::terms(5));
    EXPECT_EQ(b.delta, 0.0);
    EXPECT_DOUBLE_EQ(b.eps_plus.real(), 3.0);
    EXPECT_DOUBLE_EQ(b.eps_minus.real(), 1.0);
  }
}

TEST(LadderBloch, PartialSum) {
  const double oracle = std::sin(pi / 3) + std::sin(pi) / 3 + std::sin(5 * pi / 3) / 5;
  EXPECT_NEAR(ladder_delta(pi / 3, 1.0, SeriesCutoff::terms(3)), oracle, 1e-15);
  EXPECT_NEAR(oracle, 0.69282, 1e-5);
}

TEST(BuildSshChain, BondAmplitudes) {
  const auto h = build_ssh_chain(5, 0.1, 0.0).dense();
  for (std::size_t l = 1; l < 10; ++l) EXPECT_DOUBLE_EQ(h(l - 1, l).real(), l % 2 ? 0.45 : 0.55);
}

TEST(BuildSshChain, ZeroModeSplittingDecaysExponentially) {
  const double delta = 0.3;
  std::vector<double> logs;
  for (int n : {6, 8, 10}) {
    const auto ev = sorted_real(eig_full(build_ssh_chain(n, delta, 0.0).dense()).eigenvalues);
    const double split = ev[n] - ev[n - 1];
    logs.push_back(std::log(split));
  }
  // splitting ~ |rho|^N: slope per cell is log|rho|
  const double slope = (logs[2] - logs[0]) / 4.0;
  EXPECT_NEAR(slope, std::log(std::abs(ssh_rho(delta))), 0.05 * std::abs(std::log(std::abs(ssh_rho(delta)))));
  EXPECT_NEAR(logs[1] - logs[0], logs[2] - logs[1], 1e-2);
}

TEST(BuildSshChain, HpAnnihilatesLeftMode) {
  const auto m = build_ssh_chain(20, 0.1, 0.5);
  const auto [l, r] = ssh_edge_modes(20, 0.1);
  const auto v = numkit::apply(m.hp, l.amplitudes);
  EXPECT_TRUE(std::all_of(v.begin(), v.end(), [](const cplx& x) { return x == cplx{}; }));
}

TEST(BuildSshChain, WarnsNearDeltaEdges) {
  EXPECT_EQ(build_ssh_chain(4, 1e-4, 0.0).warnings.size(), 1u);
  EXPECT_TRUE(build_ssh_chain(4, 0.3, 0.0).warnings.empty());
  EXPECT_THROW(build_ssh_chain(4, 1.0, 0.0), InvalidSpec);
}

TEST(SshEdgeModes, RhoAndSupport) {
  EXPECT_NEAR(ssh_rho(0.1), -9.0 / 11.0, 1e-15);
  const auto [l, r] = ssh_edge_modes(12, 0.1);
  EXPECT_EQ(l[23], cplx{});
  EXPECT_EQ(r[0], cplx{});
  EXPECT_NEAR(l.norm(), 1.0, 1e-14);
  EXPECT_NEAR(r.norm(), 1.0, 1e-14);
}

TEST(SshEdgeModes, BoundaryResidualLaw) {
  for (double delta : {0.1, 0.3, 0.5})
    for (int n = 4; n <= 30; ++n) {
      const double rho = (delta - 1) / (delta + 1);
      double omega = 0.0;
      for (int j = 0; j < n; ++j) omega += std::pow(rho, 2 * j);
      const double oracle = 0.5 * (1 - delta) * std::pow(std::abs(rho), n - 1) / std::sqrt(omega);
      const auto m = build_ssh_chain(n, delta, 0.0);
      const auto [l, r] = ssh_edge_modes(n, delta);
      const auto v = numkit::apply(m.h0, l.amplitudes);
      for (std::size_t i = 0; i + 1 < v.size(); ++i) EXPECT_LE(std::abs(v[i]), 1e-15);
      EXPECT_NEAR(std::abs(v.back()), oracle, 1e-12);
      EXPECT_NEAR(ssh_boundary_residual(n, delta), oracle, 1e-14);
    }
}

TEST(BuildSshCylinder, SmallCount) {
  const auto m = build_ssh_cylinder({2, 2, 0.1, 1.0, 0.0});
  ASSERT_EQ(m.dim(), 8u);
  const auto h = m.dense();
  EXPECT_DOUBLE_EQ(h(0, 1).real(), 0.9);
  EXPECT_DOUBLE_EQ(h(1, 2).real(), 1.1);
  // two rows on a ring: both row neighbours are the same row, so J appears twice
  EXPECT_DOUBLE_EQ(h(0, 4).real(), 2.0);
  int bonds = 0;
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = i + 1; j < 8; ++j) bonds += h(i, j) != cplx{};
  EXPECT_EQ(bonds, 2 * 3 + 4);
}

TEST(BuildSshCylinder, FourZeroModesWhenRowsDivideByFour) {
  const auto ev = eig_full(build_ssh_cylinder({4, 20, 0.5, 0.1, 0.0}).dense()).eigenvalues;
  const auto zeros = std::count_if(ev.begin(), ev.end(), [](const cplx& e) { return std::abs(e) < 1e-6; });
  EXPECT_EQ(zeros, 4);
}

TEST(BuildSshCylinder, HpAnnihilatesEdgeModes) {
  SshCylinderSpec s{20, 30, 0.1, 1.0, 0.5};
  const auto m = build_ssh_cylinder(s);
  const auto [le, lo] = cylinder_edge_modes(20, 30, 0.1);
  const auto a = numkit::apply(m.hp, lo.amplitudes);
  const auto b = numkit::apply(m.hp.adjoint(), le.amplitudes);
  EXPECT_EQ(numkit::norm2(a), 0.0);
  EXPECT_EQ(numkit::norm2(b), 0.0);
}

TEST(CylinderEdgeModes, NormAndOverlap) {
  const auto [le, lo] = cylinder_edge_modes(20, 100, 0.1);
  EXPECT_EQ(numkit::inner(le.amplitudes, lo.amplitudes), cplx{});
  EXPECT_NEAR(le.norm(), 1.0, 1e-12);
  EXPECT_NEAR(lo.norm(), 1.0, 1e-12);
  const double rho = -9.0 / 11.0;
  double omega = 0.0;
  for (int row = 0; row < 10; ++row)
    for (int l = 0; l < 100; ++l) omega += std::pow(rho, 2 * l);
  EXPECT_NEAR(lo[0].real(), 1.0 / std::sqrt(omega), 1e-14);
}

TEST(CylinderEdgeModes, UniformProfileLeaksIntoNeighbouringRows) {
  const int m_rows = 20, n_cells = 40;
  const double delta = 0.3, j = 1.0;
  const auto model = build_ssh_cylinder({m_rows, n_cells, delta, j, 0.0});
  const auto boundary = cylinder_boundary_residual(m_rows, n_cells, delta);
  const auto [ue, uo] = cylinder_edge_modes(m_rows, n_cells, delta, RowProfile::Uniform);
  const auto [se, so] = cylinder_edge_modes(m_rows, n_cells, delta, RowProfile::Staggered);
  // each even row sees both odd neighbours: weight 2J on top of the boundary term
  EXPECT_NEAR(numkit::norm2(numkit::apply(model.h0, uo.amplitudes)), std::hypot(2 * j, boundary), 1e-12);
  EXPECT_NEAR(numkit::norm2(numkit::apply(model.h0, so.amplitudes)), boundary, 1e-12);
  EXPECT_NEAR(numkit::norm2(numkit::apply(model.h0, se.amplitudes)), boundary, 1e-12);
}

TEST(BuildTwoSite, JordanAndDegenerateLimits) {
  EXPECT_EQ(build_two_site(0.5, 0.0).dense(), (ComplexMatrix{{0.0, 0.5}, {0.0, 0.0}}));
  const auto ep = eig_full(build_two_site(0.5, 0.3).dense());
  EXPECT_NEAR(std::abs(ep.eigenvalues[0] - 0.3), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(ep.eigenvalues[1] - 0.3), 0.0, 1e-12);
  EXPECT_EQ(numerical_rank(ep.right_vectors, 1e-6), 1u);
  const auto dp = eig_full(build_two_site(0.0, 0.3).dense());
  EXPECT_EQ(numerical_rank(dp.right_vectors, 1e-6), 2u);
}

TEST(SiteMap, RoundTrip) {
  const SiteMap m{"cylinder", "row", "col", 4, 6};
  for (std::size_t i = 0; i < m.size(); ++i) {
    const auto [r, c] = m.coords(i);
    EXPECT_EQ(m.index(r, c), i);
  }
  EXPECT_THROW(m.index(0, 1), InvalidSpec);
  EXPECT_THROW(m.index(5, 1), InvalidSpec);
}

TEST(WithStrength, ReplacesKappaOrCoupling) {
  EXPECT_EQ(non_hermitian_strength(with_strength(RingWithHopSpec{6, 1, 1, 0.5}, 2.0)), cplx(2.0));
  EXPECT_EQ(non_hermitian_strength(with_strength(LadderSpec{8, 0.5, 2}, 1.5)), cplx(1.5));
  EXPECT_THROW(with_strength(RingSpec{6}, 1.0), InvalidSpec);
}

}  // namespace
