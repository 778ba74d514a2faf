#include "glancing/model.hpp"

#include "glancing/errors.hpp"
#include "glancing/quadrature.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <sstream>

namespace glancing {

namespace {

double min_q_eigenvalue(const WaveParams &p) {
  const int m = p.d - 1;
  Eigen::MatrixXd Q(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      Q(i, j) = p.qform[i * m + j];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Q);
  return es.eigenvalues().minCoeff();
}

double norm2(std::span<const double> v) {
  double s = 0;
  for (double x : v)
    s += x * x;
  return s;
}

void check_dim(const WaveParams &p, std::span<const double> v,
               const char *what) {
  if (static_cast<int>(v.size()) != p.d - 1)
    throw DomainError(std::string(what) + ": frequency has dimension " +
                      std::to_string(v.size()) + ", expected " +
                      std::to_string(p.d - 1));
}

} // namespace

void WaveParams::validate() const {
  if (d != 2 && d != 3)
    throw ConfigError("WaveParams: d must be 2 or 3");
  if (!(h > 0 && h <= 1))
    throw ConfigError("WaveParams: h must lie in (0, 1]");
  if (!(a >= 0) || !std::isfinite(a))
    throw ConfigError("WaveParams: a must be finite and >= 0");
  if (!(delta > 0 && delta <= 0.2))
    throw ConfigError("WaveParams: window half-width must lie in (0, 0.2]");
  const int m = d - 1;
  if (static_cast<int>(qform.size()) != m * m)
    throw ConfigError("WaveParams: q matrix must be (d-1)x(d-1)");
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < i; ++j)
      if (std::abs(qform[i * m + j] - qform[j * m + i]) > 1e-14)
        throw ConfigError("WaveParams: q matrix must be symmetric");
  if (!(min_q_eigenvalue(*this) > 0))
    throw ConfigError("WaveParams: q matrix must be positive definite");
}

double WaveParams::psi(double s) const { return bump((s - 1.0) / delta); }

double WaveParams::weight(double theta_norm, double rho_value) const {
  const double w = psi(theta_norm);
  return w == 0.0 ? 0.0 : w * psi(rho_value);
}

std::string WaveParams::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << "d=" << d << " h=" << h << " a=" << a << " delta=" << delta << " q=[";
  for (std::size_t i = 0; i < qform.size(); ++i)
    os << (i ? " " : "") << qform[i];
  os << "]";
  return os.str();
}

double q_eval(const WaveParams &p, std::span<const double> theta) {
  check_dim(p, theta, "q_eval");
  const int m = p.d - 1;
  double s = 0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      s += theta[i] * p.qform[i * m + j] * theta[j];
  return s;
}

double rho(const WaveParams &p, double alpha, std::span<const double> theta) {
  const double q = q_eval(p, theta);
  const double r2 = norm2(theta) + alpha * std::cbrt(q * q);
  if (r2 < 0)
    throw DomainError("rho: negative radicand");
  return std::sqrt(r2);
}

double tau(const WaveParams &p, double omega, std::span<const double> eta) {
  const double q = q_eval(p, eta);
  const double r2 = norm2(eta) + omega * std::cbrt(q * q);
  if (r2 < 0)
    throw DomainError("tau: negative radicand");
  return std::sqrt(r2);
}

double lambda_k(const WaveParams &p, int k, std::span<const double> eta,
                const AiryZeroTable &zeros) {
  if (k < 1 || k > zeros.K)
    throw DomainError("lambda_k: k outside the zero table");
  if (norm2(eta) == 0)
    throw DomainError("lambda_k: eta must be nonzero");
  const double q = q_eval(p, eta);
  return norm2(eta) + zeros.zeros[k - 1] * std::cbrt(q * q);
}

double mode_eval(const WaveParams &p, int k, double x,
                 std::span<const double> eta, const AiryZeroTable &zeros) {
  if (k < 1 || k > zeros.K)
    throw DomainError("mode_eval: k outside the zero table");
  if (!(x >= 0))
    throw DomainError("mode_eval: x must be >= 0");
  const double q = q_eval(p, eta);
  if (!(q > 0))
    throw DomainError("mode_eval: eta must be nonzero");
  const double q13 = std::cbrt(q);
  const AiryValue v = airy(q13 * x - zeros.zeros[k - 1]);
  return std::sqrt(q13) * v.ai / std::sqrt(zeros.norm2(k));
}

double alpha_max(const WaveParams &p, std::span<const double> theta) {
  const double r2 = norm2(theta);
  const double q = q_eval(p, theta);
  const double top = (1 + p.delta) * (1 + p.delta) - r2;
  return top <= 0 ? 0.0 : top / std::cbrt(q * q);
}

double alpha_max_window(const WaveParams &p) {
  const double lo = 1 - p.delta;
  const double lmin = min_q_eigenvalue(p);
  return 4 * p.delta / (std::pow(lo, 4.0 / 3.0) * std::cbrt(lmin * lmin));
}

int default_kmax(const WaveParams &p) {
  const double wmax = alpha_max_window(p) * std::pow(p.h, -2.0 / 3.0);
  const int K = zero_count_below(wmax);
  if (K > 10000)
    throw DomainError("default_kmax: window needs more than 1e4 modes");
  return K;
}

} // namespace glancing
