#pragma once

#include "glancing/images.hpp"

#include <array>
#include <string>
#include <vector>

namespace glancing {

// Rescaled model phase along the tangential direction ω (|θ| = 1):
//   x = aX, t = √a T, s = √a S, ϱ = √a Υ, α = aA, σ = q(ω)^{1/3},
//   Φ = S³/3 + S(σX - A) + Υ³/3 + Υ(σ - A) - N ℓ(A) + T g(A),
//   ℓ(A) = (4/3)A^{3/2} - B(λA^{3/2})/λ,  g(A) = (sqrt(1 + aσ²A) - 1)/a,
// with λ = a^{3/2}/h. Scaled parameters are 𝒮 = S/√σ, 𝒯 = Υ/√σ.
struct RescaledPhase {
  double a = 0, h = 0, sigma = 1, lambda = 0;
  int N = 0;
  int b_order = 3;          // order of the fitted B series used for ℓ
  bool b_dropped = false;   // λA^{3/2} below the asymptotic range

  RescaledPhase(const WaveParams &p, int N, double q_omega, int b_order = 3);

  double ell_p(double A) const;  // ℓ'(A) = 2√A (1 - (3/4) B'(λA^{3/2}))
  double ell_pp(double A) const; // ℓ''(A)
  double g(double A) const;
  double g_p(double A) const;
  double g_pp(double A) const;
  double ell(double A) const;

  double value(double S, double U, double A, double X, double T) const;
  // Analytic Hessian in (S, Υ, A).
  std::array<double, 9> hessian(double S, double U, double A, double T) const;
};

struct LagrangianPoint {
  int N = 0;
  double omega_dir[2] = {1, 0}; // unit tangential direction
  double S = 0, T_script = 0;   // 𝒮, 𝒯
  double X = 0, T = 0;          // rescaled normal coordinate and time
  double t = 0, x = 0, y = 0, y2 = 0; // physical
  bool b_dropped = false;
};

struct SampleSpec {
  double box = 1.0; // |𝒮|, |𝒯| ≤ box
  int n = 41;       // samples per axis
  double omega_angle = 0; // direction of ω for d = 3
};

std::vector<LagrangianPoint> project_lagrangian(const WaveParams &p, int N,
                                                const SampleSpec &spec = {});

// One point of the projection for given (𝒮, 𝒯).
LagrangianPoint lagrangian_point(const WaveParams &p, int N, double S_script,
                                 double T_script, double omega_angle = 0);

struct CausticEvent {
  int N = 0;
  double t_N = 0, x_N = 0, y_N = 0;
  double predicted_amp = 0;
  double hessian_residual = 0; // |det| of the finite-difference Hessian
  double kernel_cubic = 0;     // third derivative along the kernel (zero by symmetry)
  double kernel_quartic = 0;   // quartic coefficient of the reduced phase
  int newton_iterations = 0;
  bool b_dropped = false;
};

// Degenerate critical point of the rescaled phase: S = Υ = 0, A = σ, X = 1,
// T = Nℓ'(σ)/g'(σ), reached by Newton on (A, T) with continuation in a.
// check_range enforces 1 ≤ N ≤ min(a^{-1/2}, a^{1/2} h^{-1/3}).
CausticEvent caustic_locate(const WaveParams &p, int N, double omega_angle = 0,
                            bool check_range = true);

// h^{-d} (h/t)^{(d-2)/2} N^{-1/4} a^{1/8} h^{1/4}.
double predicted_caustic_amplitude(const WaveParams &p, int N, double t_N);

// Finite-difference Hessian determinant of the rescaled phase.
double fd_hessian_det(const RescaledPhase &ph, double S, double U, double A,
                      double X, double T, double step = 1e-3);

// Phase along the kernel direction (S, Υ) = (ε + μ, -ε + μ), A = σ + β, with
// (μ, β) eliminated by Newton. At the caustic it is F0 + c ε⁴/2 + O(ε⁶).
double reduced_phase(const RescaledPhase &ph, double X, double T, double eps);

struct ContributingCount {
  int count = 0;
  double local_max = 0;
  std::vector<ImageTermStat> terms;
};

// Number of reflected waves whose sup over the ball B_0 = {|y' - y| ≤ r0}
// around (t, x, y) exceeds threshold × the local field max.
ContributingCount count_contributing(const WaveParams &p, double t, double x,
                                     double y, double threshold,
                                     double r0 = 0.1,
                                     const ImageOptions &opt = {});

struct OverlapSample {
  double lambda = 0, T = 0;
  int count = 0;
};

struct OverlapFit {
  double C = 0;             // fitted on the calibration half
  int calibration = 0, validation = 0;
  int violations = 0;       // held-out samples above C(1 + Tλ^{-2})
  double worst_ratio = 0;   // max count / (1 + Tλ^{-2}) over all samples
};

// Alternating split: even indices calibrate C = max count/(1 + Tλ^{-2}),
// odd indices validate.
OverlapFit fit_overlap_constant(const std::vector<OverlapSample> &s);

} // namespace glancing
