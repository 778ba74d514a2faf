#pragma once

#include "glancing/airy.hpp"

#include <span>
#include <string>
#include <vector>

namespace glancing {

// One experiment: dimension, semiclassical parameter, source height, window
// half-width and the boundary curvature form q(η) = ηᵀ Q η.
struct WaveParams {
  int d = 2;
  double h = 1.0 / 256;
  double a = 0.25;
  double delta = 0.2;
  std::vector<double> qform{1.0}; // (d-1)x(d-1), row-major

  void validate() const;

  // Window ψ: C^∞ bump supported on [1-δ, 1+δ], equal to 1 at s = 1.
  double psi(double s) const;

  // Full frequency cutoff ψ(|θ|) ψ(ρ(α, θ)): tangential localisation times
  // localisation of the total frequency ρ = h·τ.
  double weight(double theta_norm, double rho) const;

  std::string describe() const;
};

double q_eval(const WaveParams &p, std::span<const double> theta);

// ρ(α, θ) = sqrt(|θ|² + α q(θ)^{2/3}).
double rho(const WaveParams &p, double alpha, std::span<const double> theta);

// τ(ω, η) = sqrt(|η|² + ω q(η)^{2/3}).
double tau(const WaveParams &p, double omega, std::span<const double> eta);

// λ_k(η) = |η|² + ω_k q(η)^{2/3}.
double lambda_k(const WaveParams &p, int k, std::span<const double> eta,
                const AiryZeroTable &zeros);

// Normalised gallery mode q(η)^{1/6} Ai(q(η)^{1/3} x - ω_k) / ‖Ai(· - ω_k)‖.
double mode_eval(const WaveParams &p, int k, double x,
                 std::span<const double> eta, const AiryZeroTable &zeros);

// Largest α admitted by the window at tangential frequency θ.
double alpha_max(const WaveParams &p, std::span<const double> theta);

// Largest α admitted anywhere in the window annulus.
double alpha_max_window(const WaveParams &p);

// Smallest K such that every mode beyond K has zero window weight.
int default_kmax(const WaveParams &p);

} // namespace glancing
