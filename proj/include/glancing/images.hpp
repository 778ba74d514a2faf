#pragma once

#include "glancing/spectral.hpp"

#include <functional>
#include <string>
#include <vector>

namespace glancing {

// ---- Airy–Poisson identity --------------------------------------------------

// A test function of ω with compact support [lo, hi].
struct OmegaTestFn {
  double lo = 0, hi = 0;
  std::function<double(double)> f;
  std::string label;
};

// amplitude · bump((ω - center)/halfwidth).
OmegaTestFn omega_bump(double center, double halfwidth, double amplitude = 1);

struct AiryPoissonReport {
  std::string test_fn;
  double lhs = 0;          // Σ_{|N| ≤ N_max} σ(N/N_max) ∫ φ e^{-iNL}
  double rhs = 0;          // 2π Σ_k φ(ω_k)/L'(ω_k)
  int N_max = 0;
  int K_max = 0;           // zeros inside the support
  double taper_width = 0;  // flat-top taper σ is 1 on |N| ≤ taper_width·N_max
  double tail_estimate = 0; // |lhs(N_max) - lhs(N_max/2)|
  double abs_discrepancy = 0;
};

// The N-sum is tapered by the C^∞ flat-top σ, whose vanishing moments make
// the smoothing error decay faster than any power of N_max. N_max doubles
// from its start value until the discrepancy meets tol or N_max_cap is hit.
AiryPoissonReport airy_poisson_check(const OmegaTestFn &phi, int N_max,
                                     double tol, int N_max_cap = 8192);

// ---- Reflected waves --------------------------------------------------------

struct ImageOptions {
  ThetaOptions theta;
  double omega_lo = -8;     // lower end of the ω = α h^{-2/3} integral
  double band_margin = 1.25; // oversampling of the ω rule over the phase rate
  double stop_ratio = 1e-4; // three consecutive terms below this × max stop the scan
  int N_cap = 4000;         // total number of terms allowed
};

struct ImageTermStat {
  int N = 0;
  double sup = 0; // sup over the grid of |V_N|
  double l2 = 0;  // L² mass on the grid (cell-volume weighted)
};

struct ReflectedWaveTerm {
  int N = 0;
  ComplexField field;
  double alpha_lo = 0, alpha_hi = 0; // α-interval carrying window weight
};

// V_N(t,x,y) = h^{-(d-1)} ∫dθ e^{iy·θ/h} ∫dω e^{-iNL(ω)} W e^{itρ/h}
//              u Ai(u x - ω) Ai(u a - ω),   u = q(θ)^{1/3} h^{-2/3}.
ReflectedWaveTerm v_n_field(const WaveParams &p, int N, const Grid &g,
                            const ImageOptions &opt = {});

struct ImageSum {
  ComplexField field;
  std::vector<ImageTermStat> terms; // ascending N
  double stop_threshold = 0;        // absolute level used by the N scan
};

// Σ_N V_N with adaptive N range, or the fixed range [N_lo, N_hi] when
// N_lo <= N_hi are given.
ImageSum image_green(const WaveParams &p, const Grid &g,
                     const ImageOptions &opt = {}, int N_lo = 1, int N_hi = 0);

struct EquivalenceReport {
  double rel_linf = 0;
  double spectral_max = 0;
  int K_max = 0;
  int N_min = 0, N_max = 0;
  int theta_nodes = 0, omega_nodes = 0;
};

// ‖Σ_{|N| ≤ N_max} V_N - spectral‖_∞ / ‖spectral‖_∞ on one grid. N_max < 0
// selects the adaptive N range; K_max <= 0 the window cutoff.
EquivalenceReport equivalence_report(const WaveParams &p, const Grid &g,
                                     int N_max, int K_max,
                                     const ImageOptions &opt = {});
double equivalence_check(const WaveParams &p, const Grid &g, int N_max,
                         int K_max, const ImageOptions &opt = {});

} // namespace glancing
