#include "glancing/caustics.hpp"
#include "glancing/dispersion.hpp"
#include "glancing/errors.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace glancing;

namespace {
WaveParams params(double h, double a) {
  WaveParams p;
  p.h = h;
  p.a = a;
  return p;
}

DecayFit synthetic(const WaveParams &p, std::vector<double> ts, double expo, double c) {
  DecayFit s;
  s.params = p;
  for (double t : ts) {
    s.t_samples.push_back(t);
    s.sup_values.push_back(c * std::pow(p.h / t, expo));
    s.x_arg.push_back(p.a);
    s.y_arg.push_back(t);
    s.caustic_N.push_back(0);
  }
  return s;
}

std::vector<double> logspace(double lo, double hi, int n) {
  std::vector<double> v;
  for (int i = 0; i < n; ++i)
    v.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1)));
  return v;
}
} // namespace

TEST(DecayFit, ExactPowerLaw) {
  const WaveParams p = params(1.0 / 256, 0.25);
  const DecayFit f = fit_decay_exponent(synthetic(p, logspace(0.05, 1, 9), 0.5, 7),
                                        FitWindow::all);
  EXPECT_NEAR(f.fitted_exponent, 0.5, 1e-6);
  EXPECT_NEAR(std::exp(f.intercept), 7, 1e-9);
  EXPECT_LT(f.fit_residual, 1e-12);
}

TEST(DecayFit, WindowNeedsSixSamples) {
  const WaveParams p = params(1.0 / 256, 0.25);
  EXPECT_THROW(fit_decay_exponent(synthetic(p, logspace(0.1, 1, 5), 0.5, 1),
                                  FitWindow::all),
               DomainError);
  DecayFit s = synthetic(p, logspace(0.1, 1, 8), 0.5, 1);
  EXPECT_THROW(fit_decay_exponent(s, FitWindow::at_caustics), DomainError);
}

TEST(DecayFit, CausticWindowUsesOnlyCausticSamples) {
  const WaveParams p = params(1.0 / 256, 0.25);
  DecayFit s = synthetic(p, logspace(0.1, 4, 12), 0.25, 1);
  for (std::size_t i = 0; i < s.t_samples.size(); i += 2) {
    s.caustic_N[i] = static_cast<int>(i / 2 + 1);
  }
  for (std::size_t i = 1; i < s.t_samples.size(); i += 2)
    s.sup_values[i] *= 5; // off-caustic samples would spoil the fit
  EXPECT_NEAR(fit_decay_exponent(s, FitWindow::at_caustics).fitted_exponent, 0.25, 1e-9);
}

TEST(Regimes, Classification) {
  const double h = std::pow(2.0, -12);
  EXPECT_EQ(classify_regimes(params(h, 0.25), 0.1, 2)[0], Regime::free);
  const auto big = classify_regimes(params(h, 0.25), 5, 2);
  ASSERT_EQ(big.size(), 1u);
  EXPECT_EQ(big[0], Regime::quarter_loss);
  const auto small = classify_regimes(params(h, std::pow(h, 0.8)), 5, 2);
  ASSERT_EQ(small.size(), 1u);
  EXPECT_EQ(small[0], Regime::third_loss);
  EXPECT_EQ(classify_regimes(params(h, std::pow(h, 0.5)), 5, 2).size(), 2u);
  EXPECT_EQ(std::string(to_string(Regime::third_loss)), "third_loss");
}

TEST(Regimes, FirstReflectionConstant) {
  const WaveParams p = params(1.0 / 256, 0.25);
  DecayFit s = synthetic(p, {0.1, 0.2, 0.3, 0.4, 0.5, 0.6}, 0.5, 1);
  EXPECT_DOUBLE_EQ(first_reflection_constant(s), 0.6 / 0.5); // monotone: bound
  s.sup_values = {5, 4, 3, 3.5, 3.2, 3.0};
  EXPECT_DOUBLE_EQ(first_reflection_constant(s), 0.4 / 0.5);
  s.sup_values = {5, 4, 3, 3.5, 3.8, 4.0};
  EXPECT_TRUE(std::isnan(first_reflection_constant(s)));
}

TEST(Envelopes, SyntheticCausticSamples) {
  const WaveParams p = params(1.0 / 1024, 0.25);
  DecayFit s;
  s.params = p;
  for (int N = 1; N <= 6; ++N) {
    const double t = 4 * N * 0.5;
    s.t_samples.push_back(t);
    s.sup_values.push_back(2 * std::pow(p.a, 0.25) * std::pow(p.h, -2) *
                           std::pow(p.h / t, 0.25));
    s.x_arg.push_back(p.a);
    s.y_arg.push_back(t);
    s.caustic_N.push_back(N);
  }
  const EnvelopeFit e = fit_envelopes(s);
  EXPECT_NEAR(e.c_lower, 2, 1e-12);
  EXPECT_GT(e.C_upper, 0);
  EXPECT_GE(e.ratio, 1);
  EXPECT_EQ(e.caustic_samples, 6);
}

TEST(SupScan, FreeWindowExponent) {
  const WaveParams p = params(1.0 / 1024, 0.25);
  const DecayFit f = fit_decay_exponent(sup_scan(p, logspace(0.05, 0.4, 6)),
                                        FitWindow::all);
  EXPECT_GE(f.fitted_exponent, 0.45);
  EXPECT_LE(f.fitted_exponent, 0.55);
  ASSERT_FALSE(f.regimes.empty());
  EXPECT_EQ(f.regimes[0], Regime::free);
}

TEST(SupScan, HalvingHInFreeWindow) {
  // sup ~ h^{-d} (h/t)^{(d-1)/2}: halving h multiplies it by 2^{d-(d-1)/2}.
  const double t = 0.3;
  const double s1 = sup_scan(params(1.0 / 128, 0.25), {t}).sup_values[0];
  const double s2 = sup_scan(params(1.0 / 256, 0.25), {t}).sup_values[0];
  EXPECT_NEAR(s2 / s1, std::pow(2.0, 1.5), 0.1 * std::pow(2.0, 1.5));
}

TEST(SupScan, CausticMaximizerNearSourceHeight) {
  const WaveParams p = params(1.0 / 256, 0.25);
  const DecayFit s = caustic_scan(p, 1, 1);
  EXPECT_EQ(s.caustic_N[0], 1);
  EXPECT_NEAR(s.x_arg[0], p.a, 0.5 * p.a);
}

TEST(SupScan, InvalidInput) {
  const WaveParams p = params(1.0 / 256, 0.25);
  EXPECT_THROW(sup_scan(p, {}), DomainError);
  EXPECT_THROW(sup_scan(p, {p.h / 2}), DomainError);
  EXPECT_THROW(caustic_scan(p, 0, 2), DomainError);
}
