#pragma once

#include <complex>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace glancing {

struct AiryValue {
  double z = 0;
  double ai = 0;
  double aip = 0;
  double abs_err_est = 0;
};

struct AiryBiValue {
  double bi = 0;
  double bip = 0;
};

// Ai and Ai' on the real line. Underflows to zero for large positive z.
AiryValue airy(double z);

// Bi and Bi'; only used to build A± and the phase L, and for Wronskian checks.
AiryBiValue airy_bi(double z);

// A±(z) = exp(∓iπ/3) Ai(exp(∓iπ/3) z) for real z, returned as (A+, A-).
// On the real line A± = (Ai(-z) ∓ i Bi(-z)) / 2.
std::pair<std::complex<double>, std::complex<double>> airy_rotated(double z);

// ∫_0^∞ Ai(x - ω)^2 dx = Ai'(-ω)^2 + ω Ai(-ω)^2.
double airy_square_integral(double omega);

struct PhaseL {
  double omega = 0;
  double value = 0;
  double derivative = 0;
};

// L(ω) = π + i log(A-(ω)/A+(ω)) on its continuous increasing branch.
// b_order > 0 switches to π/2 + (4/3)ω^{3/2} - B(ω^{3/2}) for ω ≥ 10.
PhaseL phase_L(double omega, int b_order = 0);

// Same function evaluated along an ascending list, unwrapping the branch from
// sample to sample. Internal sub-steps keep every phase increment below π/2.
std::vector<PhaseL> phase_L_tracked(std::span<const double> omegas);

struct AiryZeroTable {
  int K = 0;
  std::vector<double> zeros;   // ω_1 < ω_2 < ... with Ai(-ω_k) = 0
  std::vector<double> lprimes; // L'(ω_k)
  double tolerance = 1e-13;

  // ∫_0^∞ Ai(x - ω_k)^2 dx, the squared norm of the unscaled mode profile.
  double norm2(int k) const;

  std::string to_json() const;
  static AiryZeroTable from_json(const std::string &text);
};

AiryZeroTable airy_zeros(int K);

// Process-wide cache; returns a table holding at least K zeros.
std::shared_ptr<const AiryZeroTable> shared_zero_table(int K);

// Smallest K with ω_K ≥ omega.
int zero_count_below(double omega);

// Truncated B(u) = Σ_{k ≤ order} b_k u^{-k}, b_1 = 5/24, with the remaining
// coefficients fitted from L(ω) on ω ∈ [10, 40] separately for each order.
double b_series(double u, int order);
double b_series_derivative(double u, int order);

struct BSeriesFit {
  int order = 0;
  std::vector<double> coeffs; // b_1 .. b_order
  double max_residual = 0;    // over the fit nodes
};
const std::vector<BSeriesFit> &b_series_fits();

enum class AirySumVariant { ai, aip_pos, aip_neg };

struct AirySum {
  double sum = 0;
  double bound_shape = 0; // L^{1/3}, h^{2/3} L or h^{1/3} L^{2/3}
  double ratio = 0;
};

AirySum airy_sum_diagnostic(int L_count, double b, AirySumVariant variant,
                            double h);

// Sup of the ratio over a uniform b-grid covering the variant's half-line.
AirySum airy_sum_sup(int L_count, AirySumVariant variant, double h,
                     double db = 0.01);

// Fast Ai / Ai' for bulk mode sums: Taylor expansion about anchors spaced
// 1/32 apart, each anchor evaluated once with the accurate routine.
class AiryTable {
public:
  static const AiryTable &instance();

  double ai(double z) const;
  void ai_aip(double z, double &ai, double &aip) const;

  double zmin() const { return zmin_; }
  double zmax() const { return zmax_; }

private:
  AiryTable(double zmin, double zmax);
  double zmin_, zmax_;
  std::vector<double> f_, fp_;
};

} // namespace glancing
