#include "glancing/field.hpp"

#include "glancing/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#ifndef GLANCING_BUILD_ID
#define GLANCING_BUILD_ID "unknown"
#endif

namespace glancing {

const char *build_id() { return GLANCING_BUILD_ID; }

std::vector<double> Grid::span(double lo, double hi, double step) {
  if (!(step > 0) || !(hi >= lo))
    throw ConfigError("Grid::span: need lo <= hi and step > 0");
  const int n = std::max(1, static_cast<int>(std::ceil((hi - lo) / step - 1e-9)));
  std::vector<double> v(n + 1);
  for (int i = 0; i <= n; ++i)
    v[i] = lo + (hi - lo) * i / n;
  if (hi == lo)
    v.resize(1);
  return v;
}

double max_spacing(const std::vector<double> &axis) {
  double m = 0;
  for (std::size_t i = 1; i < axis.size(); ++i)
    m = std::max(m, std::abs(axis[i] - axis[i - 1]));
  return m;
}

void Grid::check_nyquist(double h) const {
  if (t.empty() || x.empty() || y.empty() || y2.empty())
    throw ConfigError("Grid: every axis needs at least one sample");
  const double lim = h / 8 * (1 + 1e-9);
  if (max_spacing(t) > lim)
    throw ConfigError("Grid: t spacing exceeds h/8");
  if (max_spacing(y) > lim || max_spacing(y2) > lim)
    throw ConfigError("Grid: y spacing exceeds h/8");
  for (double xv : x)
    if (!(xv >= 0))
      throw DomainError("Grid: x samples must be >= 0");
}

ComplexField::ComplexField(const WaveParams &p, const Grid &g)
    : params(p), grid(g) {
  p.validate();
  g.check_nyquist(p.h);
  if (p.d == 2 && g.y2.size() != 1)
    throw ConfigError("Grid: y2 axis is only meaningful for d = 3");
  values.assign(g.size(), cplx(0, 0));
}

double ComplexField::max_abs() const {
  double m = 0;
  for (const cplx &v : values) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw PrecisionError("ComplexField: non-finite sample");
    m = std::max(m, std::abs(v));
  }
  return m;
}

void ComplexField::write_csv(std::ostream &os,
                             const std::vector<std::string> &comments) const {
  for (const auto &c : comments)
    os << "# " << c << "\n";
  os << (params.d == 3 ? "t,x,y,y2,re,im\n" : "t,x,y,re,im\n");
  char buf[256];
  for (std::size_t it = 0; it < grid.t.size(); ++it)
    for (std::size_t ix = 0; ix < grid.x.size(); ++ix)
      for (std::size_t iy = 0; iy < grid.y.size(); ++iy)
        for (std::size_t i2 = 0; i2 < grid.y2.size(); ++i2) {
          const cplx v = at(it, ix, iy, i2);
          if (params.d == 3)
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                          grid.t[it], grid.x[ix], grid.y[iy], grid.y2[i2],
                          v.real(), v.imag());
          else
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n",
                          grid.t[it], grid.x[ix], grid.y[iy], v.real(),
                          v.imag());
          os << buf;
        }
}

double rel_linf(const ComplexField &f, const ComplexField &g) {
  if (!(f.grid == g.grid))
    throw DomainError("rel_linf: grids differ");
  double num = 0, den = 0;
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    num = std::max(num, std::abs(f.values[i] - g.values[i]));
    den = std::max(den, std::abs(g.values[i]));
  }
  if (den == 0)
    return num == 0 ? 0.0 : INFINITY;
  return num / den;
}

} // namespace glancing
