#pragma once

#include "glancing/field.hpp"

#include <span>
#include <vector>

namespace glancing {

// Largest |t|, x and tangential distance |y| that an evaluation must reach.
struct Extent {
  double t_max = 0;
  double x_max = 0;
  double y_max = 0;
};
Extent extent_of(const Grid &g);

struct ThetaOptions {
  double tol = 1e-10;   // aliasing budget of the θ rule
  double density = 1.0; // node-density multiplier (convergence studies)
};

struct ThetaNode {
  double th[2] = {0, 0};
  double norm = 0; // |θ|
  double w = 0;    // quadrature weight times ψ(|θ|)
  double q = 0;    // q(θ)
  double q23 = 0;  // q(θ)^{2/3}
  double u = 0;    // q(θ)^{1/3} h^{-2/3}
};

// Uniform rule on the window annulus. The integrand is C^∞ with compact
// support, so the trapezoid rule converges spectrally; its only error is the
// periodic image of the field at distance `period` in y, which the node
// spacing 2πh/period pushes beyond the evaluation extent. For d = 2 only
// θ > 0 is stored and the tangential factor is 2 cos(yθ/h).
struct ThetaRule {
  int d = 2;
  double step = 0;
  double period = 0;
  std::vector<ThetaNode> nodes;
};
ThetaRule theta_rule(const WaveParams &p, const Extent &e,
                     const ThetaOptions &opt = {});

// h^{-(d-1)} Σ_{k ≤ K} ∫ e^{itρ_k/h} e^{iy·θ/h} W e_k(x, θ/h) e_k(a, θ/h) dθ
// with W = ψ(|θ|) ψ(ρ_k). K_max = 0 selects the window cutoff.
ComplexField spectral_green(const WaveParams &p, const Grid &g, int K_max = 0,
                            const ThetaOptions &opt = {});

struct Point {
  double t = 0, x = 0, y = 0, y2 = 0;
};
std::vector<cplx> spectral_green_points(const WaveParams &p,
                                        std::span<const Point> pts,
                                        int K_max = 0,
                                        const ThetaOptions &opt = {});

// Fixed-t field on every x in xs and on the uniform y lattice of one θ-rule
// period, restricted to |y| ≤ y_max. One FFT per x. d = 2 only.
struct YSlab {
  double t = 0;
  std::vector<double> x, y;
  std::vector<cplx> values; // values[ix * y.size() + iy]
  double max_abs(std::size_t *ix = nullptr, std::size_t *iy = nullptr) const;
};
YSlab spectral_slab(const WaveParams &p, double t, std::span<const double> xs,
                    double y_max, int K_max = 0, const ThetaOptions &opt = {});

// f(x, y) = A bump((x-x0)/r) bump((y-y0)/r) e^{i(ξ0 x + η0 y)/h}.
struct TestBump {
  double x0 = 0.25, y0 = 0, radius = 0.08;
  double xi0 = 0, eta0 = 0;
  double amplitude = 1;
  cplx eval(double x, double y, double h) const;
};

struct DeltaRecovery {
  cplx pairing; // (2π)^{-1} ∫∫ P(0, x, y) f(x, -y) dx dy
  cplx oracle;  // frozen-coefficient multiplier applied to f, at (a, 0)
  double discrepancy = 0;
};

// The t = 0 field acts as the windowed spectral projector; applied to f and
// evaluated at the source it must agree with the flat multiplier
// ψ(h|η|) ψ(h sqrt(ξ² + (1 + q a) η²)) up to O(h). d = 2 only.
DeltaRecovery delta_recovery(const WaveParams &p, const TestBump &f);
double delta_recovery_test(const WaveParams &p, const TestBump &f);

} // namespace glancing
