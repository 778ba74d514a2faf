#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace glancing {

// Boundary-metric data near the glancing point for d = 2 (Y, Θ scalar):
// R(X, Y, Θ) = R0(Y, Θ) + X R1(Y, Θ) + O(X²), q(η) = R1(0, η).
// Partial derivatives that are left empty fall back to Richardson-extrapolated
// central differences with step 1e-5.
struct MetricJet {
  using Fn = std::function<double(double Y, double Th)>;
  std::string name;
  int d = 2;
  Fn R0, R1;
  Fn R0_Y, R0_Th, R1_Y, R1_Th;

  double r0_y(double Y, double Th) const;
  double r0_th(double Y, double Th) const;
  double r1_y(double Y, double Th) const;
  double r1_th(double Y, double Th) const;
  double q(double omega) const { return R1(0, omega); }

  // R0(0, η) = η², ∂_Y R0(0, ·) = 0 and R1(0, ·) > 0, sampled at η = ±1, ±1/2.
  void validate() const;
};

// "friedlander": R0 = R1 = η².  "test_metric": R0 = (1 + Y²)η², R1 = (1 + Y)η².
MetricJet metric_by_name(const std::string &name);
std::vector<std::string> metric_names();

// Coefficients of a jet at Y = 0: c[k] = f^{(k)}(0)/k!, k = 0..3.
using Taylor4 = std::array<double, 4>;

struct PhaseJet {
  std::string metric;
  double omega = 1;       // ±1
  std::vector<double> Y;  // increasing grid containing 0
  std::vector<double> B0, dB0, B2, dB2, ell, dell, gamma, beta, alpha;
  Taylor4 B0_taylor{}, B2_taylor{}, ell_taylor{}, gamma_taylor{};
  double eikonal_residual = 0;   // max |R0(Y, ω + B0') - 1|
  double transport_residual = 0; // max residual of the (ϱ-1) order-2 equation
  double ell_identity_residual = 0; // |3ℓ'(0) - ∂_Y R1(0, ω)/q(ω)|
  // Candidate constants for γ(0, ω) in terms of {R0, R1}(0, ω)/R1²:
  double bracket = 0;            // {R0, R1}(0, ω) by finite differences
  double gamma0 = 0;             // computed γ(0, ω)
  double gamma_over_bracket = 0; // γ(0)·R1(0)²/{R0,R1}(0); 1/12 expected
};

// Pointwise solutions at one Y.
struct JetPoint {
  double Y = 0;
  double Theta0 = 0; // ω + B0'(Y)
  double dTheta0 = 0;
  double ell = 0, dell = 0;
  double dB2 = 0;
  double gamma = 0, beta = 0;
};
JetPoint jet_point(const MetricJet &m, double omega, double Y);

// φ' from R0(Y, φ') = 1 on the branch φ'(0) = ω; B0 = φ - Yω.
// Grid values of B0 and B2 integrate the pointwise derivatives with 8-point
// Gauss–Legendre per cell.
PhaseJet solve_eikonal_B0(const MetricJet &m, double omega,
                          const std::vector<double> &Y_grid);
void compute_ell(const MetricJet &m, PhaseJet &jet);
void solve_transport_B2(const MetricJet &m, PhaseJet &jet);
void compute_gamma_beta(const MetricJet &m, PhaseJet &jet);

// All four steps on a uniform grid of n cells over [-Y_max, Y_max].
PhaseJet build_phase_jet(const MetricJet &m, double omega, double Y_max,
                         int n = 64);

struct ResidualSample {
  double Y = 0, xi_hat = 0, rho_hat = 0;
  std::vector<double> resid; // per ε
};

struct ResidualReport {
  std::vector<double> eps;
  std::vector<double> resid; // max over samples, per ε
  double slope = 0;          // least-squares slope of log resid against log ε
  double max_resid = 0;
  bool exact = false;        // every residual ≤ 1e-12 (slope not meaningful)
  bool passed = false;       // exact or slope ≥ 3.8
  ResidualSample worst;      // sample with the smallest individual slope
  double worst_slope = 0;
};

// For random (Y, ξ̂, ϱ̂) and each ε: ξ = εξ̂, ϱ - 1 = ε²ϱ̂, X from the model
// relation, Ξ and Θ from the generating relations, and
// resid = |Ξ² + R0(Y, Θ) + X R1(Y, Θ) - 1|. gamma_scale multiplies γ only
// (0 gives the negative control).
ResidualReport verify_generating_function(const MetricJet &m,
                                          const PhaseJet &jet,
                                          const std::vector<double> &eps_grid,
                                          int samples = 32,
                                          std::uint64_t seed = 1,
                                          double gamma_scale = 1.0);

std::vector<double> default_eps_grid(); // 10^{-1} … 10^{-3}, 7 points

} // namespace glancing
