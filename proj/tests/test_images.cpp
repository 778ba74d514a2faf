#include "glancing/errors.hpp"
#include "glancing/images.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace glancing;

namespace {
WaveParams params(double h, double a = 0.25) {
  WaveParams p;
  p.h = h;
  p.a = a;
  return p;
}

Grid slab(double t, std::vector<double> xs, double y_half, double h) {
  Grid g;
  g.t = {t};
  g.x = std::move(xs);
  g.y = Grid::span(-y_half, y_half, h / 8);
  return g;
}
} // namespace

TEST(AiryPoisson, BumpOverThreeZeros) {
  const OmegaTestFn phi = omega_bump(5, 2); // support [3, 7] holds ω_2, ω_3, ω_4
  const AiryPoissonReport r = airy_poisson_check(phi, 64, 1e-8);
  const auto zt = airy_zeros(5);
  double rhs = 0;
  for (int k = 2; k <= 4; ++k)
    rhs += 2 * std::numbers::pi * phi.f(zt.zeros[k - 1]) / zt.lprimes[k - 1];
  EXPECT_EQ(r.K_max, 3);
  EXPECT_NEAR(r.rhs, rhs, 1e-13);
  EXPECT_LE(std::abs(r.lhs - r.rhs), 1e-6);
}

TEST(AiryPoisson, CentredOnAZero) {
  const auto zt = airy_zeros(3);
  const OmegaTestFn phi = omega_bump(zt.zeros[2], 0.6);
  const AiryPoissonReport r = airy_poisson_check(phi, 64, 1e-8);
  EXPECT_NEAR(r.rhs, 2 * std::numbers::pi / zt.lprimes[2], 1e-13);
  EXPECT_LE(r.abs_discrepancy, 1e-6);
}

TEST(AiryPoisson, NoZerosInSupport) {
  const OmegaTestFn phi = omega_bump(-1, 0.5);
  double prev = INFINITY;
  // A loose tol stops the doubling at once, so N_max stays at n.
  for (int n : {256, 1024, 4096}) {
    const AiryPoissonReport r = airy_poisson_check(phi, n, 1e9, n);
    EXPECT_EQ(r.rhs, 0.0);
    EXPECT_EQ(r.N_max, n);
    EXPECT_LT(std::abs(r.lhs), prev);
    prev = std::abs(r.lhs);
  }
  EXPECT_LT(prev, 1e-12);
}

TEST(Images, FreeWaveDominatesBeforeFirstReflection) {
  const WaveParams p = params(1.0 / 64);
  const Grid g = slab(0.5 * std::sqrt(p.a), {0.1, 0.25, 0.4}, 0.5, p.h);
  const ComplexField v0 = v_n_field(p, 0, g).field;
  const ComplexField full = spectral_green(p, g);
  EXPECT_NEAR(v0.max_abs() / full.max_abs(), 1, 0.1);
}

TEST(Images, SumVanishesOnBoundary) {
  // The residual falls like exp(-c a^{3/2}/h): 2e-4 at h = 2^-6, 4e-11 here.
  const WaveParams p = params(1.0 / 256);
  const Grid g = slab(0.7, {0.0, 0.1, 0.25}, 0.9, p.h);
  const ImageSum s = image_green(p, g);
  double edge = 0;
  for (std::size_t iy = 0; iy < g.y.size(); ++iy)
    edge = std::max(edge, std::abs(s.field.at(0, 0, iy)));
  EXPECT_LE(edge, 1e-6 * s.field.max_abs());
}

TEST(Images, TermStatsAreOrderedAndStop) {
  const WaveParams p = params(1.0 / 64);
  const ImageSum s = image_green(p, slab(0.7, {0.25}, 0.9, p.h));
  ASSERT_GE(s.terms.size(), 3u);
  for (std::size_t i = 1; i < s.terms.size(); ++i)
    EXPECT_EQ(s.terms[i].N, s.terms[i - 1].N + 1);
  EXPECT_LT(s.terms.front().sup, s.stop_threshold);
  EXPECT_LT(s.terms.back().sup, s.stop_threshold);
}

TEST(Equivalence, DirectWaveOnlyBeforeReflection) {
  const WaveParams p = params(1.0 / 64);
  const Grid g = slab(0.25, {0.15, 0.25, 0.35}, 0.4, p.h);
  EXPECT_LE(equivalence_check(p, g, 0, 0), 0.05);
}

TEST(Equivalence, AdaptiveSumMatchesSpectral) {
  const WaveParams p = params(1.0 / 64);
  Grid g;
  g.t = Grid::span(0.6, 0.65, p.h / 8);
  g.x = {0.05, 0.25, 0.45};
  g.y = Grid::span(-0.8, 0.8, p.h / 8);
  const EquivalenceReport r = equivalence_report(p, g, -1, 0);
  EXPECT_LE(r.rel_linf, 1e-3);
  EXPECT_LE(r.N_min, 0);
  EXPECT_GE(r.N_max, 1);
}

TEST(Equivalence, SourceOnBoundary) {
  const WaveParams p = params(1.0 / 64, 0.0);
  const Grid g = slab(0.5, {0.1, 0.3}, 0.5, p.h);
  EXPECT_LE(image_green(p, g).field.max_abs(), 1e-10);
  EXPECT_LE(spectral_green(p, g).max_abs(), 1e-10);
}

TEST(Images, RejectsBadInput) {
  const WaveParams p = params(1.0 / 64);
  Grid g = slab(0.5, {0.25}, 0.1, p.h);
  g.x = {-0.1};
  EXPECT_THROW(image_green(p, g), DomainError);
}
