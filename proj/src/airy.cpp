#include "glancing/airy.hpp"

#include "glancing/errors.hpp"

#include <Eigen/Dense>
#include <boost/math/policies/policy.hpp>
#include <boost/math/special_functions/airy.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

namespace glancing {

namespace {

using namespace boost::math::policies;
using quiet_policy =
    policy<overflow_error<ignore_error>, underflow_error<ignore_error>,
           evaluation_error<ignore_error>>;

constexpr double pi = std::numbers::pi;

// Below this ω, L(ω) and L'(ω) are under 1e-140 and Bi(-ω) would overflow.
constexpr double kLFloor = -40.0;

void require_finite(double z, const char *what) {
  if (!std::isfinite(z))
    throw DomainError(std::string(what) + ": non-finite argument");
}

double guide_L(double omega) {
  const double u = omega * std::sqrt(omega);
  return pi / 2 + 4.0 / 3.0 * u - 5.0 / 24.0 / u;
}

// L reduced mod 2π from the principal argument of Ai(-ω) + i Bi(-ω).
double principal_L(double omega, double &lprime) {
  const double ai = boost::math::airy_ai(-omega, quiet_policy());
  const double bi = boost::math::airy_bi(-omega, quiet_policy());
  lprime = 2.0 / (pi * (ai * ai + bi * bi));
  return pi - 2.0 * std::atan2(bi, ai);
}

} // namespace

AiryValue airy(double z) {
  require_finite(z, "airy");
  AiryValue v;
  v.z = z;
  if (z > 105.0) {
    // Ai(105) ~ 1e-312: report the underflow explicitly.
    return v;
  }
  v.ai = boost::math::airy_ai(z, quiet_policy());
  v.aip = boost::math::airy_ai_prime(z, quiet_policy());
  const double scale = z < 0 ? std::pow(-z, 0.25) : 1.0;
  v.abs_err_est = 8 * std::numeric_limits<double>::epsilon() *
                  std::max({std::abs(v.ai), std::abs(v.aip) / scale,
                            z < 0 ? 0.6 / scale : 0.0});
  return v;
}

AiryBiValue airy_bi(double z) {
  require_finite(z, "airy_bi");
  return {boost::math::airy_bi(z, quiet_policy()),
          boost::math::airy_bi_prime(z, quiet_policy())};
}

std::pair<std::complex<double>, std::complex<double>>
airy_rotated(double z) {
  require_finite(z, "airy_rotated");
  const double ai = boost::math::airy_ai(-z, quiet_policy());
  const double bi = boost::math::airy_bi(-z, quiet_policy());
  return {{0.5 * ai, -0.5 * bi}, {0.5 * ai, 0.5 * bi}};
}

double airy_square_integral(double omega) {
  const AiryValue v = airy(-omega);
  return v.aip * v.aip + omega * v.ai * v.ai;
}

PhaseL phase_L(double omega, int b_order) {
  require_finite(omega, "phase_L");
  PhaseL r;
  r.omega = omega;
  if (omega < kLFloor)
    return r;
  if (b_order > 0 && omega >= 10.0) {
    const double sq = std::sqrt(omega);
    const double u = omega * sq;
    r.value = pi / 2 + 4.0 / 3.0 * u - b_series(u, b_order);
    r.derivative = 2.0 * sq * (1.0 - 0.75 * b_series_derivative(u, b_order));
    return r;
  }
  double lp = 0;
  double L = principal_L(omega, lp);
  if (omega >= 2.0) {
    const double g = guide_L(omega);
    L += 2 * pi * std::nearbyint((g - L) / (2 * pi));
    if (std::abs(L - g) > pi / 2)
      throw PrecisionError("phase_L: branch selection failed at omega=" +
                           std::to_string(omega));
  }
  r.value = L;
  r.derivative = lp;
  return r;
}

std::vector<PhaseL> phase_L_tracked(std::span<const double> omegas) {
  std::vector<PhaseL> out;
  out.reserve(omegas.size());
  if (omegas.empty())
    return out;
  double w_prev = omegas[0];
  PhaseL prev = phase_L(w_prev);
  out.push_back(prev);
  for (std::size_t i = 1; i < omegas.size(); ++i) {
    const double w = omegas[i];
    if (!(w >= w_prev))
      throw DomainError("phase_L_tracked: abscissae must be ascending");
    const double slope = 2.0 * std::sqrt(std::max(w, 1.0)) + 1.0;
    const int nsub =
        std::max(1, static_cast<int>(std::ceil(slope * (w - w_prev) / (pi / 4))));
    double L = prev.value, lp = prev.derivative, wc = w_prev;
    for (int s = 1; s <= nsub; ++s) {
      const double ws = w_prev + (w - w_prev) * s / nsub;
      double lps = 0;
      double Ls = wc < kLFloor && ws < kLFloor ? 0.0 : principal_L(ws, lps);
      if (ws < kLFloor) {
        Ls = 0;
        lps = 0;
      }
      const double predicted = L + lp * (ws - wc);
      Ls += 2 * pi * std::nearbyint((predicted - Ls) / (2 * pi));
      if (std::abs(Ls - L) > pi)
        throw PrecisionError("phase_L_tracked: phase jump above pi near omega=" +
                             std::to_string(ws));
      L = Ls;
      lp = lps;
      wc = ws;
    }
    prev = {w, L, lp};
    out.push_back(prev);
    w_prev = w;
  }
  return out;
}

double AiryZeroTable::norm2(int k) const {
  if (k < 1 || k > K)
    throw DomainError("AiryZeroTable::norm2: index out of table");
  return lprimes[k - 1] / (2 * pi);
}

std::string AiryZeroTable::to_json() const {
  nlohmann::ordered_json j;
  j["K"] = K;
  j["zeros"] = zeros;
  j["lprimes"] = lprimes;
  j["tolerance"] = tolerance;
  return j.dump(1);
}

AiryZeroTable AiryZeroTable::from_json(const std::string &text) {
  const auto j = nlohmann::json::parse(text);
  AiryZeroTable t;
  t.K = j.at("K").get<int>();
  t.zeros = j.at("zeros").get<std::vector<double>>();
  t.lprimes = j.at("lprimes").get<std::vector<double>>();
  t.tolerance = j.value("tolerance", 1e-13);
  if (static_cast<int>(t.zeros.size()) != t.K ||
      static_cast<int>(t.lprimes.size()) != t.K)
    throw ConfigError("AiryZeroTable: K does not match array lengths");
  return t;
}

AiryZeroTable airy_zeros(int K) {
  if (K < 1 || K > 100000)
    throw DomainError("airy_zeros: K must lie in [1, 1e5]");
  AiryZeroTable t;
  t.K = K;
  t.zeros.resize(K);
  t.lprimes.resize(K);
  auto f = [](double w) { return boost::math::airy_ai(-w, quiet_policy()); };
  double last = 0;
  for (int k = 1; k <= K; ++k) {
    const double g = std::pow(3 * pi * (4 * k - 1) / 8.0, 2.0 / 3.0);
    // Neighbouring zeros are about π/√ω apart; keep the bracket inside that.
    const double half = std::min(0.5, 0.3 * pi / std::sqrt(g));
    double lo = std::max(g - half, last + 1e-9), hi = g + half;
    double flo = f(lo), fhi = f(hi);
    if (flo * fhi > 0)
      throw InternalError("airy_zeros: bracketing failed for k=" +
                          std::to_string(k));
    while (hi - lo > 1e-6) {
      const double mid = 0.5 * (lo + hi);
      const double fm = f(mid);
      if (fm * flo <= 0) {
        hi = mid;
      } else {
        lo = mid;
        flo = fm;
      }
    }
    double w = 0.5 * (lo + hi);
    for (int it = 0; it < 4; ++it) {
      const double ai = f(w);
      const double aip = boost::math::airy_ai_prime(-w, quiet_policy());
      const double step = ai / aip;
      w += step;
      if (std::abs(step) < 1e-15 * w)
        break;
    }
    t.zeros[k - 1] = w;
    const double bi = boost::math::airy_bi(-w, quiet_policy());
    const double ai = f(w);
    t.lprimes[k - 1] = 2.0 / (pi * (ai * ai + bi * bi));
    last = w;
  }
  return t;
}

std::shared_ptr<const AiryZeroTable> shared_zero_table(int K) {
  static std::mutex m;
  static std::shared_ptr<const AiryZeroTable> cache;
  std::lock_guard<std::mutex> lock(m);
  if (!cache || cache->K < K) {
    const int want = std::min(100000, std::max(K, cache ? 2 * cache->K : 256));
    cache = std::make_shared<const AiryZeroTable>(airy_zeros(want));
  }
  return cache;
}

int zero_count_below(double omega) {
  if (omega <= 0)
    return 1;
  // ω_k ≈ (3π(4k-1)/8)^{2/3}; solve for k and add a margin, then trim.
  const int guess = static_cast<int>(
                        std::ceil((8.0 * std::pow(omega, 1.5) / (3 * pi) + 1) / 4)) +
                    2;
  auto table = shared_zero_table(guess);
  const auto &z = table->zeros;
  const auto it = std::lower_bound(z.begin(), z.begin() + guess, omega);
  return static_cast<int>(it - z.begin()) + 1;
}

namespace {

std::vector<BSeriesFit> fit_b_series() {
  // B(u) = (4/3)u + π/2 - L(ω), u = ω^{3/2}, computed in extended precision.
  using ld = long double;
  const ld pil = std::numbers::pi_v<long double>;
  const int n = 61;
  std::vector<double> us(n), rs(n);
  for (int i = 0; i < n; ++i) {
    const ld w = 10.0L + 30.0L * i / (n - 1);
    const ld ai = boost::math::airy_ai(-w);
    const ld bi = boost::math::airy_bi(-w);
    const ld phi = std::atan2(bi, ai);
    const ld u = w * std::sqrt(w);
    const ld g = pil / 2 + 4.0L / 3.0L * u;
    ld L = pil - 2 * phi;
    L += 2 * pil * std::nearbyint(static_cast<double>((g - L) / (2 * pil)));
    const ld B = g - L;
    us[i] = static_cast<double>(u);
    rs[i] = static_cast<double>(B - 5.0L / 24.0L / u);
  }
  std::vector<BSeriesFit> fits;
  for (int order = 1; order <= 6; ++order) {
    BSeriesFit f;
    f.order = order;
    f.coeffs.assign(order, 0.0);
    f.coeffs[0] = 5.0 / 24.0;
    if (order > 1) {
      Eigen::MatrixXd A(n, order - 1);
      Eigen::VectorXd r(n);
      for (int i = 0; i < n; ++i) {
        for (int k = 2; k <= order; ++k)
          A(i, k - 2) = std::pow(us[0] / us[i], k);
        r(i) = rs[i];
      }
      const Eigen::VectorXd c = A.colPivHouseholderQr().solve(r);
      for (int k = 2; k <= order; ++k)
        f.coeffs[k - 1] = c(k - 2) * std::pow(us[0], k);
    }
    for (int i = 0; i < n; ++i) {
      double model = 0;
      for (int k = 2; k <= order; ++k)
        model += f.coeffs[k - 1] * std::pow(us[i], -k);
      f.max_residual = std::max(f.max_residual, std::abs(rs[i] - model));
    }
    fits.push_back(std::move(f));
  }
  return fits;
}

} // namespace

const std::vector<BSeriesFit> &b_series_fits() {
  static const std::vector<BSeriesFit> fits = fit_b_series();
  return fits;
}

double b_series(double u, int order) {
  if (!(u >= 1.0))
    throw DomainError("b_series: u must be >= 1");
  if (order < 1 || order > 6)
    throw DomainError("b_series: order must lie in [1, 6]");
  const auto &c = b_series_fits()[order - 1].coeffs;
  double s = 0, p = 1.0 / u;
  for (int k = 0; k < order; ++k, p /= u)
    s += c[k] * p;
  return s;
}

double b_series_derivative(double u, int order) {
  if (!(u >= 1.0))
    throw DomainError("b_series_derivative: u must be >= 1");
  if (order < 1 || order > 6)
    throw DomainError("b_series_derivative: order must lie in [1, 6]");
  const auto &c = b_series_fits()[order - 1].coeffs;
  double s = 0, p = 1.0 / (u * u);
  for (int k = 0; k < order; ++k, p /= u)
    s -= (k + 1) * c[k] * p;
  return s;
}

AirySum airy_sum_diagnostic(int L_count, double b, AirySumVariant variant,
                            double h) {
  if (L_count < 1 || L_count > 10000)
    throw DomainError("airy_sum_diagnostic: L_count must lie in [1, 1e4]");
  if (!(h > 0 && h <= 1))
    throw DomainError("airy_sum_diagnostic: h must lie in (0, 1]");
  require_finite(b, "airy_sum_diagnostic");
  auto table = shared_zero_table(L_count);
  const double L = L_count;
  double s = 0;
  for (int k = 1; k <= L_count; ++k) {
    const AiryValue v = airy(b - table->zeros[k - 1]);
    const double w = std::pow(static_cast<double>(k), -1.0 / 3.0);
    s += variant == AirySumVariant::ai ? w * v.ai * v.ai : w * v.aip * v.aip;
  }
  AirySum r;
  switch (variant) {
  case AirySumVariant::ai:
    r.sum = s;
    r.bound_shape = std::cbrt(L);
    break;
  case AirySumVariant::aip_pos:
    r.sum = std::pow(h, 2.0 / 3.0) * s;
    r.bound_shape = std::pow(h, 2.0 / 3.0) * L;
    break;
  case AirySumVariant::aip_neg:
    r.sum = std::pow(h, 2.0 / 3.0) * s;
    r.bound_shape = std::cbrt(h) * std::pow(L, 2.0 / 3.0);
    break;
  }
  r.ratio = r.sum / r.bound_shape;
  return r;
}

AirySum airy_sum_sup(int L_count, AirySumVariant variant, double h,
                     double db) {
  auto table = shared_zero_table(L_count);
  const double top = table->zeros[L_count - 1] + 5.0;
  double lo = -5.0, hi = top;
  if (variant == AirySumVariant::aip_pos)
    lo = 0.0;
  if (variant == AirySumVariant::aip_neg)
    hi = 0.0;
  const int n = static_cast<int>(std::ceil((hi - lo) / db));
  AirySum best;
  for (int i = 0; i <= n; ++i) {
    const AirySum r =
        airy_sum_diagnostic(L_count, lo + (hi - lo) * i / n, variant, h);
    if (r.ratio > best.ratio)
      best = r;
  }
  return best;
}

AiryTable::AiryTable(double zmin, double zmax) : zmin_(zmin), zmax_(zmax) {
  const int n = static_cast<int>(std::lround((zmax - zmin) * 32)) + 1;
  f_.resize(n);
  fp_.resize(n);
  for (int i = 0; i < n; ++i) {
    const double z = zmin + i / 32.0;
    f_[i] = boost::math::airy_ai(z, quiet_policy());
    fp_[i] = boost::math::airy_ai_prime(z, quiet_policy());
  }
}

const AiryTable &AiryTable::instance() {
  static const AiryTable t(-640.0, 24.0);
  return t;
}

void AiryTable::ai_aip(double z, double &ai, double &aip) const {
  if (z >= zmax_) {
    ai = aip = 0;
    return;
  }
  if (z < zmin_) {
    ai = boost::math::airy_ai(z, quiet_policy());
    aip = boost::math::airy_ai_prime(z, quiet_policy());
    return;
  }
  const int i = static_cast<int>(std::lround((z - zmin_) * 32));
  const double z0 = zmin_ + i / 32.0;
  const double d = z - z0;
  // Taylor coefficients from Ai'' = z Ai: (n+2)(n+1)c_{n+2} = z0 c_n + c_{n-1}.
  double c[16];
  c[0] = f_[i];
  c[1] = fp_[i];
  c[2] = 0.5 * z0 * c[0];
  for (int n = 1; n < 14; ++n)
    c[n + 2] = (z0 * c[n] + c[n - 1]) / ((n + 2.0) * (n + 1.0));
  double s = c[15], sp = 15 * c[15];
  for (int n = 14; n >= 1; --n) {
    s = s * d + c[n];
    sp = sp * d + n * c[n];
  }
  ai = s * d + c[0];
  aip = sp;
}

double AiryTable::ai(double z) const {
  double a, ap;
  ai_aip(z, a, ap);
  return a;
}

} // namespace glancing
