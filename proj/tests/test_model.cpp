#include "glancing/errors.hpp"
#include "glancing/field.hpp"
#include "glancing/model.hpp"
#include "glancing/quadrature.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace glancing;

namespace {
constexpr double w1 = 2.338107410459767;

WaveParams d3(std::vector<double> q) {
  WaveParams p;
  p.d = 3;
  p.qform = std::move(q);
  return p;
}

// ∫_0^X f(x) dx by composite Gauss–Legendre.
template <class F> double integrate(F f, double X, int panels = 400) {
  const QuadRule r = gauss_legendre_panels(0, X, panels, 12);
  double s = 0;
  for (std::size_t i = 0; i < r.size(); ++i)
    s += r.w[i] * f(r.x[i]);
  return s;
}
} // namespace

TEST(Model, QuadraticForm) {
  WaveParams p;
  const double one[1] = {1};
  EXPECT_DOUBLE_EQ(q_eval(p, one), 1);
  const WaveParams q = d3({1, 0, 0, 4});
  const double v[2] = {1, 1}, z[2] = {0, 0};
  EXPECT_DOUBLE_EQ(q_eval(q, v), 5);
  EXPECT_DOUBLE_EQ(q_eval(q, z), 0);
}

TEST(Model, ValidationKinds) {
  WaveParams p;
  p.h = 0;
  EXPECT_THROW(p.validate(), ConfigError);
  WaveParams q = d3({1, 2, 0, 1});
  EXPECT_THROW(q.validate(), ConfigError);
  WaveParams r = d3({1, 0, 0, -1});
  EXPECT_THROW(r.validate(), ConfigError);
  WaveParams s;
  s.delta = 0.5;
  EXPECT_THROW(s.validate(), ConfigError);
}

TEST(Model, LambdaValuesAndHomogeneity) {
  const WaveParams p;
  const auto zt = airy_zeros(10);
  const double e1[1] = {1}, e2[1] = {2};
  EXPECT_NEAR(lambda_k(p, 1, e1, zt), 1 + w1, 1e-13);
  for (int k = 1; k <= 10; ++k)
    EXPECT_NEAR(lambda_k(p, k, e2, zt),
                4 + zt.zeros[k - 1] * std::pow(2.0, 4.0 / 3), 1e-12);
  EXPECT_LT(lambda_k(p, 2, e1, zt), lambda_k(p, 5, e1, zt));
  EXPECT_THROW(lambda_k(p, 11, e1, zt), DomainError);
}

TEST(Model, ModesVanishAtBoundary) {
  const WaveParams p;
  const auto zt = airy_zeros(30);
  const double eta[1] = {1.25};
  for (int k = 1; k <= 30; ++k)
    EXPECT_NEAR(mode_eval(p, k, 0, eta, zt), 0, 1e-12);
}

TEST(Model, ModesAreOrthonormal) {
  const WaveParams p;
  const auto zt = airy_zeros(30);
  for (double en : {0.8, 1.0, 1.25}) {
    const double eta[1] = {en};
    const double X = (zt.zeros[29] + 30) / std::cbrt(en * en);
    for (int k : {1, 2, 7, 30}) {
      const double n = integrate(
          [&](double x) {
            const double e = mode_eval(p, k, x, eta, zt);
            return e * e;
          },
          X);
      EXPECT_NEAR(n, 1, 1e-8) << "k=" << k << " eta=" << en;
    }
  }
  const double eta[1] = {1};
  const double ip = integrate(
      [&](double x) { return mode_eval(p, 1, x, eta, zt) * mode_eval(p, 2, x, eta, zt); },
      40);
  EXPECT_NEAR(ip, 0, 1e-8);
}

TEST(Model, WindowAndCutoff) {
  WaveParams p;
  EXPECT_DOUBLE_EQ(p.psi(1), 1);
  EXPECT_EQ(p.psi(1 + p.delta), 0);
  EXPECT_EQ(p.psi(0.5), 0);
  const double th[1] = {1};
  EXPECT_NEAR(rho(p, 0, th), 1, 1e-15);
  // ω_K already lies past the largest α the window admits.
  const int K = default_kmax(p);
  const auto zt = airy_zeros(K);
  EXPECT_GE(zt.zeros[K - 1] * std::pow(p.h, 2.0 / 3), alpha_max_window(p));
}

TEST(Grid, SpanAndNyquist) {
  const auto v = Grid::span(0, 1, 0.3);
  ASSERT_EQ(v.size(), 5u);
  EXPECT_DOUBLE_EQ(v.back(), 1);
  Grid g;
  g.t = {0.1, 0.2};
  g.x = {0.25};
  g.y = {0};
  EXPECT_THROW(g.check_nyquist(1.0 / 64), ConfigError);
  g.t = {0.1};
  g.y = Grid::span(-0.1, 0.1, 1.0 / 512);
  EXPECT_NO_THROW(g.check_nyquist(1.0 / 64));
  g.x = {-0.1};
  EXPECT_THROW(g.check_nyquist(1.0 / 64), DomainError);
}

TEST(Field, CsvHeaderAndComments) {
  WaveParams p;
  p.h = 1.0 / 64;
  Grid g;
  g.t = {0.5};
  g.x = {0.1, 0.2};
  g.y = {0};
  ComplexField f(p, g);
  f.at(0, 1, 0) = cplx(1, -2);
  std::ostringstream os;
  f.write_csv(os, {"a = 1"});
  EXPECT_EQ(os.str(), "# a = 1\nt,x,y,re,im\n0.5,0.10000000000000001,0,0,0\n"
                      "0.5,0.20000000000000001,0,1,-2\n");
  EXPECT_DOUBLE_EQ(f.max_abs(), std::sqrt(5.0));
}
