#include "glancing/quadrature.hpp"

#include "glancing/errors.hpp"

#include <gsl/gsl_integration.h>

#include <cmath>

namespace glancing {

QuadRule gauss_legendre(int n, double a, double b) {
  if (n < 1)
    throw DomainError("gauss_legendre: need at least one node");
  gsl_integration_glfixed_table *t = gsl_integration_glfixed_table_alloc(n);
  if (!t)
    throw InternalError("gauss_legendre: table allocation failed");
  QuadRule r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < n; ++i)
    gsl_integration_glfixed_point(a, b, i, &r.x[i], &r.w[i], t);
  gsl_integration_glfixed_table_free(t);
  return r;
}

QuadRule gauss_legendre_panels(double a, double b, int panels, int order) {
  if (panels < 1)
    throw DomainError("gauss_legendre_panels: need at least one panel");
  const QuadRule ref = gauss_legendre(order, 0.0, 1.0);
  QuadRule r;
  r.x.reserve(panels * order);
  r.w.reserve(panels * order);
  const double hpan = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * hpan;
    for (int i = 0; i < order; ++i) {
      r.x.push_back(lo + hpan * ref.x[i]);
      r.w.push_back(hpan * ref.w[i]);
    }
  }
  return r;
}

QuadRule trapezoid(double a, double b, int n) {
  if (n < 2)
    throw DomainError("trapezoid: need at least two nodes");
  QuadRule r;
  r.x.resize(n);
  r.w.assign(n, (b - a) / (n - 1));
  for (int i = 0; i < n; ++i)
    r.x[i] = a + (b - a) * i / (n - 1);
  r.w.front() *= 0.5;
  r.w.back() *= 0.5;
  return r;
}

double bump(double s) {
  const double s2 = s * s;
  if (s2 >= 1.0)
    return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - s2));
}

double flat_top(double s) {
  const double as = std::abs(s);
  if (as <= 0.5)
    return 1.0;
  if (as >= 1.0)
    return 0.0;
  // Ratio of one-sided exp(-1/x) ramps gives a C^∞ transition.
  auto g = [](double x) { return x > 0 ? std::exp(-1.0 / x) : 0.0; };
  const double v = (1.0 - as) / 0.5;
  return g(v) / (g(v) + g(1.0 - v));
}

} // namespace glancing
