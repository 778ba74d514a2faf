#include "glancing/dispersion.hpp"

#include "glancing/caustics.hpp"
#include "glancing/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace glancing {

namespace {

struct SupAt {
  double sup = 0, x = 0, y = 0;
};

double y_extent(double t) { return 1.2 * t + 0.5; }

SupAt sup_spectral(const WaveParams &p, double t, const std::vector<double> &xs,
                   double c0) {
  const YSlab s = spectral_slab(p, t, xs, y_extent(t));
  SupAt r;
  const double ymin = c0 * t;
  for (std::size_t ix = 0; ix < s.x.size(); ++ix)
    for (std::size_t iy = 0; iy < s.y.size(); ++iy) {
      if (std::abs(s.y[iy]) < ymin)
        continue;
      const double v = std::abs(s.values[ix * s.y.size() + iy]);
      if (v > r.sup) {
        r.sup = v;
        r.x = s.x[ix];
        r.y = s.y[iy];
      }
    }
  return r;
}

SupAt sup_images(const WaveParams &p, double t, const std::vector<double> &xs,
                 double c0) {
  Grid g;
  g.t = {t};
  g.x = xs;
  const double ym = y_extent(t);
  g.y = Grid::span(-ym, ym, p.h / 8);
  const ImageSum s = image_green(p, g);
  SupAt r;
  for (std::size_t ix = 0; ix < g.x.size(); ++ix)
    for (std::size_t iy = 0; iy < g.y.size(); ++iy) {
      if (std::abs(g.y[iy]) < c0 * t)
        continue;
      const double v = std::abs(s.field.at(0, ix, iy));
      if (v > r.sup) {
        r.sup = v;
        r.x = g.x[ix];
        r.y = g.y[iy];
      }
    }
  return r;
}

std::vector<double> x_axis(double lo, double hi, double dx) {
  std::vector<double> xs;
  const int n = static_cast<int>(std::ceil((hi - lo) / dx - 1e-9));
  for (int i = 0; i <= n; ++i)
    xs.push_back(std::min(hi, lo + i * dx));
  return xs;
}

} // namespace

const char *to_string(Regime r) {
  switch (r) {
  case Regime::free:
    return "free";
  case Regime::quarter_loss:
    return "quarter_loss";
  case Regime::third_loss:
    return "third_loss";
  }
  return "?";
}

const char *to_string(ScanMethod m) {
  return m == ScanMethod::spectral ? "spectral" : "images";
}

DecayFit sup_scan(const WaveParams &p, const std::vector<double> &t_grid,
                  const ScanBox &box, ScanMethod method) {
  p.validate();
  if (p.d != 2)
    throw DomainError("sup_scan: d = 2 only");
  if (t_grid.empty())
    throw DomainError("sup_scan: empty t grid");
  for (double t : t_grid)
    if (!(t > p.h) || !std::isfinite(t))
      throw DomainError("sup_scan: every t must exceed h");
  const double x_hi = box.x_hi < 0 ? 2 * p.a + 0.05 : box.x_hi;
  const double dx0 = box.dx > 0 ? box.dx
                                : std::min(std::cbrt(p.h * p.h) / 2, p.a / 8);
  if (!(box.x_lo >= 0) || !(x_hi > box.x_lo) || !(box.c0 >= 0))
    throw DomainError("sup_scan: invalid box");

  DecayFit out;
  out.params = p;
  for (double t : t_grid) {
    double dx = dx0;
    auto eval = [&](double step) {
      const auto xs = x_axis(box.x_lo, x_hi, step);
      return method == ScanMethod::spectral ? sup_spectral(p, t, xs, box.c0)
                                            : sup_images(p, t, xs, box.c0);
    };
    SupAt cur = eval(dx);
    bool converged = false;
    for (int r = 0; r < box.max_refine; ++r) {
      dx /= 2;
      const SupAt nxt = eval(dx);
      const double change = std::abs(nxt.sup - cur.sup) / std::max(nxt.sup, 1e-300);
      cur = nxt;
      if (change < box.refine_tol) {
        converged = true;
        break;
      }
    }
    if (!converged && box.max_refine > 0) {
      std::ostringstream os;
      os << "sup at t=" << t << " still moving after " << box.max_refine
         << " refinements";
      out.warnings.push_back(os.str());
    }
    if (!(cur.sup > 0))
      throw PrecisionError("sup_scan: vanishing sup");
    out.t_samples.push_back(t);
    out.sup_values.push_back(cur.sup);
    out.x_arg.push_back(cur.x);
    out.y_arg.push_back(cur.y);
    out.caustic_N.push_back(0);
  }
  return out;
}

DecayFit caustic_scan(const WaveParams &p, int N_lo, int N_hi,
                      const ScanBox &box, ScanMethod method) {
  if (N_lo < 1 || N_hi < N_lo)
    throw DomainError("caustic_scan: need 1 <= N_lo <= N_hi");
  std::vector<double> ts;
  for (int N = N_lo; N <= N_hi; ++N)
    ts.push_back(caustic_locate(p, N, 0, false).t_N);
  DecayFit s = sup_scan(p, ts, box, method);
  for (int N = N_lo; N <= N_hi; ++N)
    s.caustic_N[N - N_lo] = N;
  return s;
}

DecayFit fit_decay_exponent(const DecayFit &scan, FitWindow window) {
  DecayFit out = scan;
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < scan.t_samples.size(); ++i) {
    if (window == FitWindow::at_caustics && scan.caustic_N[i] == 0)
      continue;
    if (!(scan.sup_values[i] > 0))
      throw DomainError("fit_decay_exponent: sup values must be positive");
    lx.push_back(std::log(scan.params.h / scan.t_samples[i]));
    ly.push_back(std::log(scan.sup_values[i]));
  }
  const std::size_t n = lx.size();
  if (n < 6)
    throw DomainError("fit_decay_exponent: need at least 6 samples in the window");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (!(sxx > 0))
    throw DomainError("fit_decay_exponent: degenerate t window");
  out.fitted_exponent = sxy / sxx;
  out.intercept = my - out.fitted_exponent * mx;
  double rss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ly[i] - out.intercept - out.fitted_exponent * lx[i];
    rss += r * r;
  }
  out.fit_residual = std::sqrt(rss / n);
  double tmax = 0;
  for (std::size_t i = 0; i < scan.t_samples.size(); ++i)
    if (window == FitWindow::all || scan.caustic_N[i] != 0)
      tmax = std::max(tmax, scan.t_samples[i]);
  out.regimes = classify_regimes(scan.params, tmax, first_reflection_constant(scan));
  return out;
}

double first_reflection_constant(const DecayFit &scan) {
  const auto &t = scan.t_samples;
  const auto &s = scan.sup_values;
  // Samples are taken in increasing t; skip the initial decay, then report
  // the first local maximum.
  std::size_t i = 1;
  while (i < s.size() && s[i] <= s[i - 1])
    ++i;
  const bool monotone = i >= s.size();
  for (; i + 1 < s.size(); ++i)
    if (s[i] >= s[i - 1] && s[i] > s[i + 1])
      return t[i] / std::sqrt(scan.params.a);
  // Monotone decay throughout: every sample precedes the first reflection,
  // so the last one bounds c from below.
  if (monotone && !t.empty())
    return t.back() / std::sqrt(scan.params.a);
  return std::numeric_limits<double>::quiet_NaN();
}

std::vector<Regime> classify_regimes(const WaveParams &p, double t_max,
                                     double c_free) {
  constexpr double eps = 0.05;
  std::vector<Regime> r;
  if (std::isfinite(c_free) && t_max <= c_free * std::sqrt(p.a)) {
    r.push_back(Regime::free);
    return r;
  }
  if (p.a >= std::pow(p.h, 2.0 / 3 - eps))
    r.push_back(Regime::quarter_loss);
  if (p.a <= std::pow(p.h, 1.0 / 3 + eps))
    r.push_back(Regime::third_loss);
  return r;
}

EnvelopeFit fit_envelopes(const DecayFit &scan) {
  const WaveParams &p = scan.params;
  const int d = p.d;
  EnvelopeFit f;
  f.c_lower = INFINITY;
  for (std::size_t i = 0; i < scan.t_samples.size(); ++i) {
    const double ht = p.h / scan.t_samples[i];
    const double base = std::pow(p.h, -d) * std::pow(ht, 0.5 * (d - 2));
    const double up = base * (std::sqrt(ht) +
                              std::pow(std::max(p.a, scan.x_arg[i]), 0.25) *
                                  std::pow(ht, 0.25) +
                              std::cbrt(p.h));
    f.C_upper = std::max(f.C_upper, scan.sup_values[i] / up);
    ++f.samples;
    if (scan.caustic_N[i] != 0) {
      const double lo = std::pow(p.a, 0.25) * base * std::pow(ht, 0.25);
      f.c_lower = std::min(f.c_lower, scan.sup_values[i] / lo);
      ++f.caustic_samples;
    }
  }
  if (f.caustic_samples == 0)
    throw DomainError("fit_envelopes: no caustic samples");
  f.ratio = std::max(f.C_upper / f.c_lower, f.c_lower / f.C_upper);
  return f;
}

} // namespace glancing
