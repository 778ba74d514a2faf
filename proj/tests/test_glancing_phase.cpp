#include "glancing/errors.hpp"
#include "glancing/glancing_phase.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace glancing;

TEST(Metric, Catalogue) {
  EXPECT_EQ(metric_names().size(), 2u);
  EXPECT_NO_THROW(metric_by_name("friedlander").validate());
  EXPECT_NO_THROW(metric_by_name("test_metric").validate());
  EXPECT_THROW(metric_by_name("sphere"), ConfigError);
}

TEST(Metric, ValidationRejectsBadJet) {
  MetricJet m = metric_by_name("friedlander");
  m.R1 = [](double, double Th) { return -Th * Th; };
  EXPECT_THROW(m.validate(), DomainError);
  m = metric_by_name("friedlander");
  m.R0 = [](double Y, double Th) { return (1 + Y) * Th * Th; };
  m.R0_Y = nullptr;
  EXPECT_THROW(m.validate(), DomainError);
  m.R1 = nullptr;
  EXPECT_THROW(m.validate(), ConfigError);
}

TEST(Metric, FiniteDifferenceFallback) {
  MetricJet m = metric_by_name("test_metric");
  const double exact = m.r1_y(0.2, 0.7);
  m.R1_Y = nullptr;
  EXPECT_NEAR(m.r1_y(0.2, 0.7), exact, 1e-10);
}

TEST(Friedlander, AllCorrectionsVanish) {
  const MetricJet m = metric_by_name("friedlander");
  for (double w : {1.0, -1.0}) {
    const PhaseJet j = build_phase_jet(m, w, 0.5);
    for (std::size_t i = 0; i < j.Y.size(); ++i) {
      EXPECT_NEAR(j.B0[i], 0, 1e-14);
      EXPECT_NEAR(j.B2[i], 0, 1e-14);
      EXPECT_NEAR(j.gamma[i], 0, 1e-14);
    }
    const ResidualReport r = verify_generating_function(m, j, default_eps_grid(), 16, 5);
    EXPECT_TRUE(r.exact);
    EXPECT_TRUE(r.passed);
    EXPECT_LE(r.max_resid, 1e-12);
  }
}

TEST(TestMetric, EikonalClosedForm) {
  // (1 + Y²)φ'² = 1 gives φ = ω asinh Y.
  const MetricJet m = metric_by_name("test_metric");
  for (double w : {1.0, -1.0}) {
    const PhaseJet j = build_phase_jet(m, w, 0.3);
    for (std::size_t i = 0; i < j.Y.size(); ++i) {
      const double Y = j.Y[i];
      EXPECT_NEAR(j.B0[i], w * (std::asinh(Y) - Y), 1e-12);
      EXPECT_NEAR(j.dB0[i], w * (1 / std::sqrt(1 + Y * Y) - 1), 1e-12);
    }
    EXPECT_LE(j.eikonal_residual, 1e-12);
    EXPECT_NEAR(j.B0_taylor[2], 0, 1e-8); // ∇²B0(0) = 0
    EXPECT_NEAR(j.B0_taylor[3], -w / 6, 1e-6);
  }
}

TEST(TestMetric, EllAndTransport) {
  const MetricJet m = metric_by_name("test_metric");
  for (double w : {1.0, -1.0}) {
    const PhaseJet j = build_phase_jet(m, w, 0.3);
    EXPECT_NEAR(j.ell_taylor[0], 0, 1e-12);
    EXPECT_NEAR(j.ell_taylor[1], 1.0 / 3, 1e-8);
    EXPECT_LE(j.ell_identity_residual, 1e-8);
    EXPECT_NEAR(j.B2_taylor[2], w / 3, 1e-6);
    EXPECT_LE(j.transport_residual, 1e-9);
  }
}

TEST(TestMetric, GammaAtGlancingPoint) {
  const MetricJet m = metric_by_name("test_metric");
  for (double w : {1.0, -1.0}) {
    const PhaseJet j = build_phase_jet(m, w, 0.3);
    const JetPoint p = jet_point(m, w, 0);
    EXPECT_NEAR(j.gamma0, w / 6, 1e-8);
    EXPECT_NEAR(p.gamma, w / 6, 1e-8);
    EXPECT_NEAR(p.beta, 2 * p.gamma, 1e-12);
    EXPECT_NEAR(j.bracket, 2 * w, 1e-6);
    EXPECT_NEAR(j.gamma_over_bracket, 1.0 / 12, 1e-6);
  }
}

TEST(TestMetric, GeneratingFunctionIsFourthOrder) {
  const MetricJet m = metric_by_name("test_metric");
  for (double w : {1.0, -1.0}) {
    const PhaseJet j = build_phase_jet(m, w, 0.3);
    const ResidualReport r = verify_generating_function(m, j, default_eps_grid(), 32, 3);
    EXPECT_FALSE(r.exact);
    EXPECT_GE(r.slope, 3.8) << "omega=" << w;
    EXPECT_TRUE(r.passed);
    // Dropping γ leaves an ε³ error.
    const ResidualReport c =
        verify_generating_function(m, j, default_eps_grid(), 32, 3, 0.0);
    EXPECT_LT(c.slope, 3.5);
    EXPECT_FALSE(c.passed);
  }
}

TEST(TestMetric, ReproducibleBySeed) {
  const MetricJet m = metric_by_name("test_metric");
  const PhaseJet j = build_phase_jet(m, 1, 0.3);
  const auto a = verify_generating_function(m, j, default_eps_grid(), 8, 11);
  const auto b = verify_generating_function(m, j, default_eps_grid(), 8, 11);
  EXPECT_EQ(a.resid, b.resid);
  EXPECT_EQ(default_eps_grid().size(), 7u);
}

TEST(TestMetric, GridOutsideValidityRejected) {
  EXPECT_THROW(build_phase_jet(metric_by_name("test_metric"), 1, 0.5), DomainError);
}
