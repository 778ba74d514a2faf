#pragma once

#include "glancing/model.hpp"

#include <complex>
#include <iosfwd>
#include <string>
#include <vector>

namespace glancing {

using cplx = std::complex<double>;

// Rectilinear sample set in (t, x, y); y2 is the second tangential
// coordinate and stays {0} for d = 2.
struct Grid {
  std::vector<double> t, x, y, y2{0.0};

  std::size_t size() const { return t.size() * x.size() * y.size() * y2.size(); }
  std::size_t index(std::size_t it, std::size_t ix, std::size_t iy,
                    std::size_t iy2 = 0) const {
    return ((it * x.size() + ix) * y.size() + iy) * y2.size() + iy2;
  }

  // Inclusive uniform samples from lo to hi with spacing at most `step`.
  static std::vector<double> span(double lo, double hi, double step);

  // Throws ConfigError if a sampled t or y axis is coarser than h/8.
  void check_nyquist(double h) const;

  bool operator==(const Grid &o) const {
    return t == o.t && x == o.x && y == o.y && y2 == o.y2;
  }
};

double max_spacing(const std::vector<double> &axis);

struct Truncation {
  int K_max = 0;
  int theta_nodes = 0;
  int omega_nodes = 0;
  int N_min = 0;
  int N_max = 0;
  double tail_estimate = 0;
  double tolerance = 0;
};

struct ComplexField {
  WaveParams params;
  Grid grid;
  std::vector<cplx> values;
  Truncation truncation;

  ComplexField() = default;
  // Validates the parameters and the Nyquist constraint, zero-fills values.
  ComplexField(const WaveParams &p, const Grid &g);

  cplx &at(std::size_t it, std::size_t ix, std::size_t iy, std::size_t iy2 = 0) {
    return values[grid.index(it, ix, iy, iy2)];
  }
  const cplx &at(std::size_t it, std::size_t ix, std::size_t iy,
                 std::size_t iy2 = 0) const {
    return values[grid.index(it, ix, iy, iy2)];
  }

  double max_abs() const;

  // Header row t,x,y,re,im (t,x,y,y2,re,im for d = 3). Lines starting with
  // '#' before the header carry the build id and config echo.
  void write_csv(std::ostream &os, const std::vector<std::string> &comments) const;
};

// ‖f - g‖_∞ / ‖g‖_∞ on identical grids.
double rel_linf(const ComplexField &f, const ComplexField &g);

// Build identifier baked in at configure time.
const char *build_id();

} // namespace glancing
