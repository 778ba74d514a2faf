#include "glancing/caustics.hpp"
#include "glancing/errors.hpp"
#include "glancing/spectral.hpp"

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

double det3(const std::array<double, 9> &m) {
  return m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
         m[2] * (m[3] * m[7] - m[4] * m[6]);
}

// ∂(X, T)/∂(𝒮, 𝒯) by central differences.
double jacobian(const WaveParams &p, int N, double Ss, double Ts) {
  const double e = 1e-6;
  const auto xs = lagrangian_point(p, N, Ss + e, Ts), xm = lagrangian_point(p, N, Ss - e, Ts);
  const auto ts = lagrangian_point(p, N, Ss, Ts + e), tm = lagrangian_point(p, N, Ss, Ts - e);
  const double XS = (xs.X - xm.X) / (2 * e), TS = (xs.T - xm.T) / (2 * e);
  const double XT = (ts.X - tm.X) / (2 * e), TT = (ts.T - tm.T) / (2 * e);
  return XS * TT - XT * TS;
}

// Hessian determinant of the phase in (S, Υ, A) at the critical point over (𝒮, 𝒯).
double hessian_det(const WaveParams &p, int N, double Ss, double Ts) {
  const RescaledPhase ph(p, N, 1.0);
  const double sq = std::sqrt(ph.sigma);
  const LagrangianPoint pt = lagrangian_point(p, N, Ss, Ts);
  return det3(ph.hessian(sq * Ss, sq * Ts, ph.sigma * (1 + Ts * Ts), pt.T));
}
} // namespace

TEST(Lagrangian, NormalIncidenceBounce) {
  const WaveParams p = params(1.0 / 1024, 1e-6);
  for (int N = 1; N <= 3; ++N) {
    const LagrangianPoint pt = lagrangian_point(p, N, 0, 0);
    EXPECT_DOUBLE_EQ(pt.X, 1);
    EXPECT_NEAR(pt.T, 4 * N, 1e-5);
  }
}

TEST(Lagrangian, InitialSheet) {
  const WaveParams p = params(1.0 / 1024, 0.01);
  for (double s : {-0.7, 0.0, 0.4})
    EXPECT_NEAR(lagrangian_point(p, 0, s, -s).T, 0, 1e-15);
}

TEST(Lagrangian, CloudSize) {
  SampleSpec spec;
  spec.n = 11;
  EXPECT_EQ(project_lagrangian(params(1.0 / 1024, 0.01), 1, spec).size(), 121u);
}

TEST(Lagrangian, FoldEnvelopeIsHessianZeroSet) {
  // The fold is where the projection (𝒮, 𝒯) → (X, T) degenerates; the
  // independent oracle is the determinant of the phase Hessian.
  const WaveParams p = params(1.0 / 1024, 0.01);
  const RescaledPhase ph(p, 1, 1.0);
  for (double Ts : {-0.6, 0.25, 0.8}) {
    const double A = ph.sigma * (1 + Ts * Ts);
    for (double Ss = -1.5; Ss <= 1.5; Ss += 0.25) {
      const double J = jacobian(p, 1, Ss, Ts);
      const double H = hessian_det(p, 1, Ss, Ts);
      EXPECT_NEAR(J, H / (ph.sigma * ph.g_p(A)), 1e-6 * (1 + std::abs(J)))
          << "S=" << Ss << " T=" << Ts;
    }
  }
}

TEST(Caustic, ThirdSwallowtailTime) {
  const CausticEvent e = caustic_locate(params(std::pow(2.0, -17), 0.01), 3);
  EXPECT_NEAR(e.t_N, 1.2, 0.2 * 1.2);
  EXPECT_NEAR(e.x_N, 0.01, 1e-12);
  EXPECT_LE(e.hessian_residual, 1e-8);
}

TEST(Caustic, DegenerateDirection) {
  const WaveParams p = params(std::pow(2.0, -17), 0.01);
  const CausticEvent e = caustic_locate(p, 2);
  // Along the kernel the cubic term cancels by symmetry; the quartic
  // coefficient of the reduced phase matches a numerical reduction.
  EXPECT_NEAR(e.kernel_cubic, 0, 1e-6);
  const RescaledPhase ph(p, 2, 1.0);
  const double T = e.t_N / std::sqrt(p.a);
  const double f0 = reduced_phase(ph, 1, T, 0);
  const double eps = 0.05;
  const double c4 = (reduced_phase(ph, 1, T, eps) - f0) / std::pow(eps, 4);
  EXPECT_NEAR(c4, e.kernel_quartic, 0.02 * std::abs(e.kernel_quartic));
  EXPECT_LT(e.kernel_quartic, 0);
}

TEST(Caustic, RangeChecked) {
  const WaveParams p = params(1.0 / 1024, 0.01);
  EXPECT_THROW(caustic_locate(p, 5), DomainError);
  EXPECT_THROW(caustic_locate(p, 0), DomainError);
  EXPECT_NO_THROW(caustic_locate(p, 5, 0, false));
}

TEST(Caustic, AmplitudeLawExponents) {
  const WaveParams p = params(1.0 / 512, 0.25);
  const double t = 0.8;
  EXPECT_NEAR(predicted_caustic_amplitude(p, 4, 4 * t) /
                  predicted_caustic_amplitude(p, 1, t),
              1 / std::sqrt(2.0), 1e-14);
}

TEST(Caustic, FieldAmplitudeAtFirstSwallowtail) {
  // Both laws carry the same unspecified constant; it is measured in the free
  // window and divided out before comparing.
  const WaveParams p = params(1.0 / 512, 0.25);
  const CausticEvent e = caustic_locate(p, 1);
  const double tf = 0.2;
  const YSlab free = spectral_slab(p, tf, std::vector<double>{0.1, 0.2, 0.25, 0.3}, 0.5);
  const double c0 = free.max_abs() / (std::pow(p.h, -2) * std::sqrt(p.h / tf));
  std::vector<double> xs;
  for (double x = 0.15; x <= 0.35; x += 0.01)
    xs.push_back(x);
  const YSlab at = spectral_slab(p, e.t_N, xs, std::abs(e.y_N) + 0.15);
  const double ratio = at.max_abs() / (c0 * e.predicted_amp);
  EXPECT_GT(ratio, 1.0 / 3);
  EXPECT_LT(ratio, 3.0);
}

TEST(Overlap, SingleWaveBeforeReflection) {
  const WaveParams p = params(1.0 / 64, 0.25);
  const ContributingCount c = count_contributing(p, 0.3, 0.25, 0.3, 0.05);
  EXPECT_EQ(c.count, 1);
  for (const auto &t : c.terms)
    if (t.sup > 0.05 * c.local_max)
      EXPECT_EQ(t.N, 0);
}

TEST(Overlap, FewWavesAtModerateTimes) {
  const WaveParams p = params(1.0 / 64, 0.25);
  for (double T : {2.0, 5.0, 8.0}) {
    const double t = T * std::sqrt(p.a);
    const ContributingCount c = count_contributing(p, t, p.a, t, 0.05);
    EXPECT_GE(c.count, 1);
    EXPECT_LE(c.count, 4) << "T=" << T;
  }
}

TEST(Overlap, FitOnSyntheticCounts) {
  std::vector<OverlapSample> s;
  for (double lam : {4.0, 8.0, 16.0})
    for (double T : {1.0, 10.0, 40.0})
      s.push_back({lam, T, static_cast<int>(std::floor(2 * (1 + T / (lam * lam))))});
  const OverlapFit f = fit_overlap_constant(s);
  EXPECT_EQ(f.calibration + f.validation, 9);
  EXPECT_LE(f.C, 2.0);
  EXPECT_LE(f.worst_ratio, 2.0 + 1e-12);
  EXPECT_THROW(fit_overlap_constant({s[0]}), DomainError);
}
