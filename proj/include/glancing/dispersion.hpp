#pragma once

#include "glancing/images.hpp"

#include <string>
#include <vector>

namespace glancing {

enum class ScanMethod { spectral, images };
enum class FitWindow { all, at_caustics };
enum class Regime { free, quarter_loss, third_loss };

const char *to_string(Regime r);
const char *to_string(ScanMethod m);

// Search region for the sup at one time. x_hi < 0 selects 2a + 0.05; dx <= 0
// selects min(h^{2/3}/2, a/8). Points with |y| < c0·t lie behind the front
// and are masked out.
struct ScanBox {
  double x_lo = 0, x_hi = -1, dx = 0;
  double c0 = 0.25;
  int max_refine = 3;       // halvings of dx
  double refine_tol = 0.02; // relative sup change that ends refinement
};

struct DecayFit {
  WaveParams params;
  std::vector<double> t_samples;
  std::vector<double> sup_values;
  std::vector<double> x_arg, y_arg;  // maximizer per sample
  std::vector<int> caustic_N;        // N if the sample is a caustic time, else 0
  double fitted_exponent = 0;        // slope of log sup against log(h/t)
  double intercept = 0;
  double fit_residual = 0;           // RMS of the log residuals
  std::vector<Regime> regimes;       // two entries when the parameters straddle
  std::vector<std::string> warnings; // unconverged refinements
};

// Sup over the box of |field| at each t; dx is halved until the sup moves by
// less than refine_tol. t must lie in (h, ∞). d = 2.
DecayFit sup_scan(const WaveParams &p, const std::vector<double> &t_grid,
                  const ScanBox &box = {},
                  ScanMethod method = ScanMethod::spectral);

// sup_scan at the caustic times t_N, N_lo ≤ N ≤ N_hi, outside the asymptotic
// N range as well.
DecayFit caustic_scan(const WaveParams &p, int N_lo, int N_hi,
                      const ScanBox &box = {},
                      ScanMethod method = ScanMethod::spectral);

// Least-squares exponent over the chosen window (≥ 6 samples).
DecayFit fit_decay_exponent(const DecayFit &scan, FitWindow window);

// c in t ≤ c√a from the first local maximum of sup(t) after its initial
// decay. A scan that decays monotonically returns t_last/√a, a lower bound;
// NaN when sup(t) rises and never turns over.
double first_reflection_constant(const DecayFit &scan);

// Regime labels with ε = 0.05; t_max ≤ c√a gives free.
std::vector<Regime> classify_regimes(const WaveParams &p, double t_max,
                                     double c_free);

struct EnvelopeFit {
  // sup ≤ C h^{-d} (h/t)^{(d-2)/2} ((h/t)^{1/2} + sup(a,x)^{1/4}(h/t)^{1/4} + h^{1/3})
  double C_upper = 0;
  // sup ≥ c a^{1/4} h^{-d} (h/t)^{(d-2)/2 + 1/4} at caustic samples
  double c_lower = 0;
  double ratio = 0; // max(C/c, c/C)
  int samples = 0, caustic_samples = 0;
};
EnvelopeFit fit_envelopes(const DecayFit &scan);

} // namespace glancing
