#pragma once

#include <vector>

namespace glancing {

struct QuadRule {
  std::vector<double> x;
  std::vector<double> w;
  std::size_t size() const { return x.size(); }
};

// n-point Gauss–Legendre rule on [a, b].
QuadRule gauss_legendre(int n, double a, double b);

// Composite Gauss–Legendre: `panels` equal panels of `order` points each.
QuadRule gauss_legendre_panels(double a, double b, int panels, int order);

// Uniform trapezoid rule with n points including both endpoints. Spectrally
// accurate for smooth integrands that vanish with all derivatives at a and b.
QuadRule trapezoid(double a, double b, int n);

// C^∞ bump exp(1 - 1/(1 - s²)) on (-1, 1), equal to 1 at s = 0.
double bump(double s);

// Smooth flat-top taper: 1 for |s| ≤ 1/2, 0 for |s| ≥ 1.
double flat_top(double s);

} // namespace glancing
