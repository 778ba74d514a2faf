#include "glancing/caustics.hpp"

#include "glancing/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace glancing {

namespace {

constexpr double kBMin = 5.0; // smallest λA^{3/2} where the B series is used

std::array<double, 2> direction(const WaveParams &p, double angle) {
  if (p.d == 2)
    return {1.0, 0.0};
  return {std::cos(angle), std::sin(angle)};
}

double q_dir(const WaveParams &p, const std::array<double, 2> &w) {
  return q_eval(p, std::span<const double>(w.data(), p.d - 1));
}

} // namespace

RescaledPhase::RescaledPhase(const WaveParams &p, int N_, double q_omega,
                             int order)
    : a(p.a), h(p.h), sigma(std::cbrt(q_omega)),
      lambda(std::pow(p.a, 1.5) / p.h), N(N_), b_order(order) {
  if (!(q_omega > 0))
    throw DomainError("RescaledPhase: q(omega) must be positive");
  b_dropped = lambda * std::pow(sigma, 1.5) < kBMin;
}

double RescaledPhase::ell(double A) const {
  const double u = lambda * std::pow(A, 1.5);
  double v = 4.0 / 3.0 * std::pow(A, 1.5);
  if (u >= kBMin)
    v -= b_series(u, b_order) / lambda;
  return v;
}

double RescaledPhase::ell_p(double A) const {
  const double sq = std::sqrt(A);
  const double u = lambda * A * sq;
  if (u < kBMin)
    return 2 * sq;
  return 2 * sq * (1 - 0.75 * b_series_derivative(u, b_order));
}

double RescaledPhase::ell_pp(double A) const {
  const double sq = std::sqrt(A);
  const double u = lambda * A * sq;
  if (u < kBMin)
    return 1 / sq;
  const double du = 1e-4 * u;
  const double bpp = (b_series_derivative(u + du, b_order) -
                      b_series_derivative(u - du, b_order)) / (2 * du);
  return (1 - 0.75 * b_series_derivative(u, b_order)) / sq -
         2.25 * lambda * A * bpp;
}

double RescaledPhase::g(double A) const {
  const double z = sigma * sigma * A;
  return z / (std::sqrt(1 + a * z) + 1);
}

double RescaledPhase::g_p(double A) const {
  return sigma * sigma / (2 * std::sqrt(1 + a * sigma * sigma * A));
}

double RescaledPhase::g_pp(double A) const {
  const double s2 = sigma * sigma;
  return -a * s2 * s2 / (4 * std::pow(1 + a * s2 * A, 1.5));
}

double RescaledPhase::value(double S, double U, double A, double X,
                            double T) const {
  return S * S * S / 3 + S * (sigma * X - A) + U * U * U / 3 +
         U * (sigma - A) - N * ell(A) + T * g(A);
}

std::array<double, 9> RescaledPhase::hessian(double S, double U, double A,
                                             double T) const {
  const double c = -N * ell_pp(A) + T * g_pp(A);
  return {2 * S, 0, -1, 0, 2 * U, -1, -1, -1, c};
}

double fd_hessian_det(const RescaledPhase &ph, double S, double U, double A,
                      double X, double T, double step) {
  const double z0[3] = {S, U, A};
  auto f = [&](const double *z) { return ph.value(z[0], z[1], z[2], X, T); };
  double H[3][3];
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) {
      double acc = 0;
      for (int si : {-1, 1})
        for (int sj : {-1, 1}) {
          double z[3] = {z0[0], z0[1], z0[2]};
          z[i] += si * step;
          z[j] += sj * step;
          acc += si * sj * f(z);
        }
      H[i][j] = H[j][i] = acc / (4 * step * step);
    }
  return H[0][0] * (H[1][1] * H[2][2] - H[1][2] * H[2][1]) -
         H[0][1] * (H[1][0] * H[2][2] - H[1][2] * H[2][0]) +
         H[0][2] * (H[1][0] * H[2][1] - H[1][1] * H[2][0]);
}

double reduced_phase(const RescaledPhase &ph, double X, double T, double eps) {
  const double s = ph.sigma;
  double mu = 0, be = eps * eps;
  for (int it = 0; it < 60; ++it) {
    const double S = eps + mu, U = -eps + mu, A = s + be;
    const double f1 = (S * S + s * X - A) + (U * U + s - A);
    const double f2 = -S - U - ph.N * ph.ell_p(A) + T * ph.g_p(A);
    const double c = -ph.N * ph.ell_pp(A) + T * ph.g_pp(A);
    // [[2S+2U, -2], [-2, c]] (dμ, dβ) = -(f1, f2)
    const double j11 = 2 * S + 2 * U, j12 = -2, j22 = c;
    const double det = j11 * j22 - j12 * j12;
    const double dmu = (-f1 * j22 + j12 * f2) / det;
    const double dbe = (-j11 * f2 + j12 * f1) / det;
    mu += dmu;
    be += dbe;
    if (std::abs(dmu) + std::abs(dbe) < 1e-15)
      break;
  }
  return ph.value(eps + mu, -eps + mu, s + be, X, T);
}

LagrangianPoint lagrangian_point(const WaveParams &p, int N, double Ss,
                                 double Ts, double omega_angle) {
  const auto w = direction(p, omega_angle);
  const double q = q_dir(p, w);
  const RescaledPhase ph(p, N, q);
  const double s = ph.sigma, sq = std::sqrt(s);
  LagrangianPoint pt;
  pt.N = N;
  pt.omega_dir[0] = w[0];
  pt.omega_dir[1] = w[1];
  pt.S = Ss;
  pt.T_script = Ts;
  const double Acal = 1 + Ts * Ts; // 𝒜 = A/σ
  const double A = s * Acal;
  pt.X = 1 + Ts * Ts - Ss * Ss;
  pt.T = (sq * (Ss + Ts) + N * ph.ell_p(A)) / ph.g_p(A);
  pt.b_dropped = ph.lambda * std::pow(A, 1.5) < kBMin;

  const double sa = std::sqrt(p.a);
  pt.t = sa * pt.T;
  pt.x = p.a * pt.X;
  // -y = a^{1/2} (F ω + a G ∇q(ω)),
  // F = T (1 + a q 𝒜)^{-1/2},  G = 𝒜T / (3 (1 + a q 𝒜)^{1/2}) + (𝒮X + 𝒯)/(3 q^{1/2}).
  const double r = std::sqrt(1 + p.a * q * Acal);
  const double F = pt.T / r;
  const double G = Acal * pt.T / (3 * r) + (Ss * pt.X + Ts) / (3 * std::sqrt(q));
  double grad[2] = {0, 0};
  if (p.d == 2) {
    grad[0] = 2 * p.qform[0] * w[0];
  } else {
    const auto &Q = p.qform;
    grad[0] = 2 * (Q[0] * w[0] + Q[1] * w[1]);
    grad[1] = 2 * (Q[2] * w[0] + Q[3] * w[1]);
  }
  pt.y = -sa * (F * w[0] + p.a * G * grad[0]);
  pt.y2 = p.d == 3 ? -sa * (F * w[1] + p.a * G * grad[1]) : 0.0;
  return pt;
}

std::vector<LagrangianPoint> project_lagrangian(const WaveParams &p, int N,
                                                const SampleSpec &spec) {
  p.validate();
  if (!(spec.box > 0) || !std::isfinite(spec.box) || spec.n < 2)
    throw DomainError("project_lagrangian: need box > 0 and n >= 2");
  if (N < 0)
    throw DomainError("project_lagrangian: N must be non-negative");
  std::vector<LagrangianPoint> out;
  out.reserve(static_cast<std::size_t>(spec.n) * spec.n);
  for (int i = 0; i < spec.n; ++i)
    for (int j = 0; j < spec.n; ++j) {
      const double Ss = -spec.box + 2 * spec.box * i / (spec.n - 1);
      const double Ts = -spec.box + 2 * spec.box * j / (spec.n - 1);
      out.push_back(lagrangian_point(p, N, Ss, Ts, spec.omega_angle));
    }
  return out;
}

double predicted_caustic_amplitude(const WaveParams &p, int N, double t_N) {
  const int d = p.d;
  return std::pow(p.h, -d) * std::pow(p.h / t_N, 0.5 * (d - 2)) *
         std::pow(N, -0.25) * std::pow(p.a, 0.125) * std::pow(p.h, 0.25);
}

CausticEvent caustic_locate(const WaveParams &p, int N, double omega_angle,
                            bool check_range) {
  p.validate();
  if (N < 1)
    throw DomainError("caustic_locate: N must be >= 1");
  if (check_range) {
    const double nmax = std::min(1 / std::sqrt(p.a), std::sqrt(p.a) / std::cbrt(p.h));
    if (N > nmax) {
      std::ostringstream os;
      os << "caustic_locate: N=" << N << " outside 1 <= N <= " << nmax;
      throw DomainError(os.str());
    }
  }
  const auto w = direction(p, omega_angle);
  const double q = q_dir(p, w);
  const double s = std::cbrt(q);

  // Model seed at a = 0: A = σ, T = 4N σ^{-3/2}.
  double A = s, T = 4.0 * N / (s * std::sqrt(s));
  int iters = 0;
  constexpr int kSteps = 8;
  WaveParams pk = p;
  for (int k = 1; k <= kSteps; ++k) {
    pk.a = p.a * k / kSteps;
    const RescaledPhase ph(pk, N, q);
    bool ok = false;
    for (int it = 0; it < 50; ++it, ++iters) {
      const double f1 = s - A; // Υ-equation with Υ = 0
      const double f2 = -N * ph.ell_p(A) + T * ph.g_p(A);
      if (std::abs(f1) + std::abs(f2) <= 1e-14 * (1 + T)) {
        ok = true;
        break;
      }
      // J = [[-1, 0], [c, g']], c = -Nℓ'' + Tg''
      const double c = -N * ph.ell_pp(A) + T * ph.g_pp(A);
      const double dA = f1;
      const double dT = (-f2 - c * dA) / ph.g_p(A);
      A += dA;
      T += dT;
    }
    if (!ok) {
      std::ostringstream os;
      os << "caustic_locate: Newton did not converge at a=" << pk.a
         << " (A=" << A << ", T=" << T << ")";
      throw PrecisionError(os.str());
    }
  }
  const RescaledPhase ph(p, N, q);
  const double X = A / s;

  CausticEvent ev;
  ev.N = N;
  ev.newton_iterations = iters;
  ev.b_dropped = ph.b_dropped;
  ev.hessian_residual = std::abs(fd_hessian_det(ph, 0, 0, A, X, T));
  // Along (1, -1, 0) the cubic part is S³/3 + Υ³/3, which cancels.
  const double e = 1e-2;
  auto along = [&](double t) { return ph.value(t, -t, A, X, T); };
  ev.kernel_cubic = (along(2 * e) - 2 * along(e) + 2 * along(-e) - along(-2 * e)) /
                    (2 * e * e * e);
  ev.kernel_quartic = 0.5 * (-N * ph.ell_pp(A) + T * ph.g_pp(A));

  const LagrangianPoint lp = lagrangian_point(p, N, 0, 0, omega_angle);
  ev.t_N = std::sqrt(p.a) * T;
  ev.x_N = p.a * X;
  ev.y_N = lp.y;
  ev.predicted_amp = predicted_caustic_amplitude(p, N, ev.t_N);
  return ev;
}

ContributingCount count_contributing(const WaveParams &p, double t, double x,
                                     double y, double threshold, double r0,
                                     const ImageOptions &opt) {
  p.validate();
  if (p.d != 2)
    throw DomainError("count_contributing: d = 2 only");
  if (!(threshold > 0 && threshold < 1) || !(r0 > 0))
    throw DomainError("count_contributing: need 0 < threshold < 1 and r0 > 0");
  if (!(t > 0) || !(x >= 0))
    throw DomainError("count_contributing: need t > 0 and x >= 0");
  Grid g;
  g.t = {t};
  const double dx = r0 / 4;
  for (double xv = std::max(0.0, x - r0); xv <= x + r0 + 1e-12; xv += dx)
    g.x.push_back(xv);
  g.y = Grid::span(y - r0, y + r0, p.h / 8);
  const ImageSum s = image_green(p, g, opt);
  ContributingCount c;
  c.local_max = s.field.max_abs();
  c.terms = s.terms;
  for (const auto &st : s.terms)
    if (st.sup > threshold * c.local_max)
      ++c.count;
  return c;
}

OverlapFit fit_overlap_constant(const std::vector<OverlapSample> &s) {
  if (s.size() < 2)
    throw DomainError("fit_overlap_constant: need at least two samples");
  OverlapFit f;
  auto shape = [](const OverlapSample &o) {
    return 1 + o.T / (o.lambda * o.lambda);
  };
  for (std::size_t i = 0; i < s.size(); i += 2) {
    f.C = std::max(f.C, s[i].count / shape(s[i]));
    ++f.calibration;
  }
  for (std::size_t i = 1; i < s.size(); i += 2) {
    ++f.validation;
    if (s[i].count > f.C * shape(s[i]) * (1 + 1e-12))
      ++f.violations;
  }
  for (const auto &o : s)
    f.worst_ratio = std::max(f.worst_ratio, o.count / shape(o));
  return f;
}

} // namespace glancing
