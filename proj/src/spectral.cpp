#include "glancing/spectral.hpp"

#include "glancing/errors.hpp"
#include "glancing/parallel.hpp"
#include "glancing/quadrature.hpp"
#include "synthesis.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>

namespace glancing {

namespace detail {

int resolve_kmax(const WaveParams &p, int K_max) {
  const int K = K_max > 0 ? K_max : default_kmax(p);
  if (K > 100000)
    throw DomainError("K_max exceeds the zero table limit");
  return K;
}

namespace {

// F += Gc · C where C holds the tangential factors of nodes n0 .. n0+B-1.
void accumulate_chunk(const ThetaRule &r, const Grid &g, double h, std::size_t n0,
                      const Eigen::Ref<const Eigen::MatrixXcd> &Gc, RowMatC &F) {
  constexpr Eigen::Index kRows = 64;
  const Eigen::Index M = F.rows(), Ny = F.cols(), B = Gc.cols();
  const std::size_t nrb = (M + kRows - 1) / kRows;
  if (r.d == 2) {
    Eigen::MatrixXd C(B, Ny);
    for (Eigen::Index j = 0; j < B; ++j)
      for (Eigen::Index iy = 0; iy < Ny; ++iy)
        C(j, iy) = tangential_factor(r, r.nodes[n0 + j], g.y[iy], 0, h).real();
    const Eigen::MatrixXd Gr = Gc.real(), Gi = Gc.imag();
    parallel_for(nrb, [&](std::size_t b) {
      const Eigen::Index lo = b * kRows, n = std::min(kRows, M - lo);
      const Eigen::MatrixXd re = Gr.middleRows(lo, n) * C;
      const Eigen::MatrixXd im = Gi.middleRows(lo, n) * C;
      F.middleRows(lo, n).real() += re;
      F.middleRows(lo, n).imag() += im;
    });
  } else {
    Eigen::MatrixXcd C(B, Ny);
    const std::size_t n2 = g.y2.size();
    for (Eigen::Index j = 0; j < B; ++j)
      for (std::size_t iy = 0; iy < g.y.size(); ++iy)
        for (std::size_t i2 = 0; i2 < n2; ++i2)
          C(j, iy * n2 + i2) =
              tangential_factor(r, r.nodes[n0 + j], g.y[iy], g.y2[i2], h);
    parallel_for(nrb, [&](std::size_t b) {
      const Eigen::Index lo = b * kRows, n = std::min(kRows, M - lo);
      F.middleRows(lo, n) += Gc.middleRows(lo, n) * C;
    });
  }
}

constexpr std::size_t kNodeChunk = 256;

} // namespace

void synthesize(const ThetaRule &r, const Grid &g, double h,
                const std::function<void(std::size_t, Eigen::Ref<Eigen::VectorXcd>)> &block,
                RowMatC &F) {
  const Eigen::Index M = g.t.size() * g.x.size();
  F.setZero(M, g.y.size() * g.y2.size());
  const std::size_t nn = r.nodes.size();
  for (std::size_t n0 = 0; n0 < nn; n0 += kNodeChunk) {
    const std::size_t B = std::min(kNodeChunk, nn - n0);
    Eigen::MatrixXcd Gc(M, B);
    parallel_for(B, [&](std::size_t j) { block(n0 + j, Gc.col(j)); });
    accumulate_chunk(r, g, h, n0, Gc, F);
  }
}

void synthesize_matrix(const ThetaRule &r, const Grid &g, double h,
                       const Eigen::MatrixXcd &Gall, RowMatC &F) {
  F.setZero(g.t.size() * g.x.size(), g.y.size() * g.y2.size());
  const std::size_t nn = r.nodes.size();
  for (std::size_t n0 = 0; n0 < nn; n0 += kNodeChunk) {
    const std::size_t B = std::min(kNodeChunk, nn - n0);
    accumulate_chunk(r, g, h, n0, Gall.middleCols(n0, B), F);
  }
}

} // namespace detail

namespace {

using detail::RowMatC;

void q_extremes(const WaveParams &p, double &lmin, double &lmax) {
  if (p.d == 2) {
    lmin = lmax = p.qform[0];
    return;
  }
  const double a = p.qform[0], b = p.qform[1], c = p.qform[3];
  const double m = 0.5 * (a + c), s = std::hypot(0.5 * (a - c), b);
  lmin = m - s;
  lmax = m + s;
}

// Coefficients of the k-sum at one θ node: rho[k] and coef[k] such that the
// node's contribution is Σ_k coef[k] e^{itρ_k/h} Ai(u x - ω_k). Returns the
// number of leading modes with nonzero window weight.
int mode_block(const WaveParams &p, const ThetaNode &nd, const AiryZeroTable &zt,
               int K, std::vector<double> &rho, std::vector<double> &coef) {
  rho.assign(K, 0.0);
  coef.assign(K, 0.0);
  if (nd.w == 0)
    return 0;
  const AiryTable &tab = AiryTable::instance();
  const double h23 = std::cbrt(p.h * p.h);
  const double hfac = std::pow(p.h, -(p.d - 1));
  const double top = 1 + p.delta;
  int keff = 0;
  for (int k = 0; k < K; ++k) {
    const double r = std::sqrt(nd.norm * nd.norm + h23 * zt.zeros[k] * nd.q23);
    if (r >= top)
      break;
    rho[k] = r;
    const double W = p.psi(r);
    if (W == 0)
      continue;
    coef[k] = nd.w * W * hfac * (2 * M_PI / zt.lprimes[k]) * nd.u *
              tab.ai(nd.u * p.a - zt.zeros[k]);
    keff = k + 1;
  }
  return keff;
}

void check_points(std::span<const Point> pts) {
  for (const Point &pt : pts)
    if (!(pt.x >= 0) || !std::isfinite(pt.t) || !std::isfinite(pt.y) ||
        !std::isfinite(pt.y2))
      throw DomainError("evaluation point outside the half-space x >= 0");
}

double tail_bound(const WaveParams &p, const ThetaRule &rule,
                  const AiryZeroTable &zt, int K) {
  const int Kdef = default_kmax(p);
  if (K >= Kdef)
    return 0.0;
  double s = 0;
  std::vector<double> rho, coef;
  for (const ThetaNode &nd : rule.nodes) {
    mode_block(p, nd, zt, Kdef, rho, coef);
    for (int k = K; k < Kdef; ++k)
      s += std::abs(coef[k]);
  }
  return s * 0.5357 * (rule.d == 2 ? 2 : 1); // sup |Ai|
}

std::mutex g_fftw_mutex;

} // namespace

Extent extent_of(const Grid &g) {
  Extent e;
  for (double t : g.t)
    e.t_max = std::max(e.t_max, std::abs(t));
  for (double x : g.x)
    e.x_max = std::max(e.x_max, x);
  for (double y : g.y)
    for (double y2 : g.y2)
      e.y_max = std::max(e.y_max, std::hypot(y, y2));
  return e;
}

ThetaRule theta_rule(const WaveParams &p, const Extent &e,
                     const ThetaOptions &opt) {
  p.validate();
  if (!(opt.tol > 0 && opt.tol < 1) || !(opt.density > 0))
    throw ConfigError("theta_rule: need 0 < tol < 1 and density > 0");
  double lmin, lmax;
  q_extremes(p, lmin, lmax);
  const double lo = 1 - p.delta, hi = 1 + p.delta;
  // Spread in y of one node's (t, x) block: group velocity of ρ plus the
  // θ-derivative of the Airy phases at x and at the source.
  const double airy_rate = (2.0 / 3.0) * std::sqrt(alpha_max_window(p)) *
                           std::cbrt(lmax) / std::cbrt(lo);
  const double spread = 1.5 * e.t_max + airy_rate * (e.x_max + p.a) + 0.5;
  const double lt = std::log(1 / opt.tol);
  const double margin = 0.75 * lt * lt * p.h / p.delta;
  const double preq = e.y_max + spread + margin;
  const double dreq = 2 * M_PI * p.h / preq / opt.density;
  const int nint = std::max(4, static_cast<int>(std::ceil(2 * p.delta / dreq)));

  ThetaRule r;
  r.d = p.d;
  r.step = 2 * p.delta / nint;
  r.period = 2 * M_PI * p.h / r.step;
  const double h23 = std::cbrt(p.h * p.h);
  auto finish = [&](ThetaNode &nd) {
    nd.q = nd.th[0] * nd.th[0] * p.qform[0];
    if (p.d == 3)
      nd.q = p.qform[0] * nd.th[0] * nd.th[0] +
             2 * p.qform[1] * nd.th[0] * nd.th[1] +
             p.qform[3] * nd.th[1] * nd.th[1];
    nd.q23 = std::cbrt(nd.q * nd.q);
    nd.u = std::cbrt(nd.q) / h23;
  };
  if (p.d == 2) {
    for (int j = 1; j < nint; ++j) {
      ThetaNode nd;
      nd.th[0] = nd.norm = lo + j * r.step;
      nd.w = r.step * p.psi(nd.norm);
      finish(nd);
      r.nodes.push_back(nd);
    }
  } else {
    int nphi = static_cast<int>(std::ceil(2 * M_PI * hi / r.step));
    nphi += nphi % 2;
    for (int j = 1; j < nint; ++j) {
      const double rad = lo + j * r.step;
      const double w = rad * r.step * (2 * M_PI / nphi) * p.psi(rad);
      if (w == 0)
        continue;
      for (int m = 0; m < nphi; ++m) {
        ThetaNode nd;
        const double phi = 2 * M_PI * m / nphi;
        nd.th[0] = rad * std::cos(phi);
        nd.th[1] = rad * std::sin(phi);
        nd.norm = rad;
        nd.w = w;
        finish(nd);
        r.nodes.push_back(nd);
      }
    }
  }
  return r;
}

ComplexField spectral_green(const WaveParams &p, const Grid &g, int K_max,
                            const ThetaOptions &opt) {
  ComplexField f(p, g);
  const int K = detail::resolve_kmax(p, K_max);
  const auto zt = shared_zero_table(K);
  const ThetaRule rule = theta_rule(p, extent_of(g), opt);
  const AiryTable &tab = AiryTable::instance();
  const std::size_t nt = g.t.size(), nx = g.x.size();

  auto block = [&](std::size_t n, Eigen::Ref<Eigen::VectorXcd> col) {
    const ThetaNode &nd = rule.nodes[n];
    std::vector<double> rho, coef;
    const int ke = mode_block(p, nd, *zt, K, rho, coef);
    if (ke == 0) {
      col.setZero();
      return;
    }
    Eigen::MatrixXcd A(ke, nx);
    for (int k = 0; k < ke; ++k)
      for (std::size_t ix = 0; ix < nx; ++ix)
        A(k, ix) = tab.ai(nd.u * g.x[ix] - zt->zeros[k]);
    Eigen::MatrixXcd E(nt, ke);
    for (std::size_t it = 0; it < nt; ++it)
      for (int k = 0; k < ke; ++k)
        E(it, k) = coef[k] * std::polar(1.0, g.t[it] * rho[k] / p.h);
    const Eigen::MatrixXcd G = E * A;
    for (std::size_t it = 0; it < nt; ++it)
      for (std::size_t ix = 0; ix < nx; ++ix)
        col(it * nx + ix) = G(it, ix);
  };
  RowMatC F;
  detail::synthesize(rule, g, p.h, block, F);
  std::copy(F.data(), F.data() + F.size(), f.values.begin());

  f.truncation.K_max = K;
  f.truncation.theta_nodes = static_cast<int>(rule.nodes.size());
  f.truncation.tolerance = opt.tol;
  const double fm = f.max_abs();
  const double tail = tail_bound(p, rule, *zt, K);
  f.truncation.tail_estimate = fm > 0 ? tail / fm : tail;
  return f;
}

std::vector<cplx> spectral_green_points(const WaveParams &p,
                                        std::span<const Point> pts, int K_max,
                                        const ThetaOptions &opt) {
  p.validate();
  check_points(pts);
  Extent e;
  for (const Point &pt : pts) {
    e.t_max = std::max(e.t_max, std::abs(pt.t));
    e.x_max = std::max(e.x_max, pt.x);
    e.y_max = std::max(e.y_max, std::hypot(pt.y, pt.y2));
  }
  const int K = detail::resolve_kmax(p, K_max);
  const auto zt = shared_zero_table(K);
  const ThetaRule rule = theta_rule(p, e, opt);
  const std::size_t nn = rule.nodes.size();
  std::vector<std::vector<double>> rho(nn), coef(nn);
  std::vector<int> ke(nn);
  parallel_for(nn, [&](std::size_t n) {
    ke[n] = mode_block(p, rule.nodes[n], *zt, K, rho[n], coef[n]);
  });
  const AiryTable &tab = AiryTable::instance();
  std::vector<cplx> out(pts.size());
  parallel_for(pts.size(), [&](std::size_t i) {
    const Point &pt = pts[i];
    cplx acc = 0;
    for (std::size_t n = 0; n < nn; ++n) {
      if (ke[n] == 0)
        continue;
      const ThetaNode &nd = rule.nodes[n];
      cplx gsum = 0;
      for (int k = 0; k < ke[n]; ++k)
        gsum += coef[n][k] * std::polar(1.0, pt.t * rho[n][k] / p.h) *
                tab.ai(nd.u * pt.x - zt->zeros[k]);
      acc += gsum * detail::tangential_factor(rule, nd, pt.y, pt.y2, p.h);
    }
    out[i] = acc;
  });
  return out;
}

double YSlab::max_abs(std::size_t *ix, std::size_t *iy) const {
  double m = -1;
  const std::size_t ny = y.size();
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double a = std::abs(values[i]);
    if (a > m) {
      m = a;
      if (ix)
        *ix = i / ny;
      if (iy)
        *iy = i % ny;
    }
  }
  return m;
}

YSlab spectral_slab(const WaveParams &p, double t, std::span<const double> xs,
                    double y_max, int K_max, const ThetaOptions &opt) {
  if (p.d != 2)
    throw DomainError("spectral_slab: d = 2 only");
  for (double x : xs)
    if (!(x >= 0))
      throw DomainError("spectral_slab: x must be >= 0");
  Extent e{std::abs(t), 0, y_max};
  for (double x : xs)
    e.x_max = std::max(e.x_max, x);
  ThetaOptions o = opt;
  ThetaRule rule = theta_rule(p, e, o);
  if (rule.period < 2.05 * y_max) {
    o.density *= 2.05 * y_max / rule.period;
    rule = theta_rule(p, e, o);
  }
  const int K = detail::resolve_kmax(p, K_max);
  const auto zt = shared_zero_table(K);
  const AiryTable &tab = AiryTable::instance();
  const std::size_t nn = rule.nodes.size();
  std::vector<std::vector<double>> rho(nn), coef(nn);
  std::vector<int> ke(nn);
  parallel_for(nn, [&](std::size_t n) {
    ke[n] = mode_block(p, rule.nodes[n], *zt, K, rho[n], coef[n]);
  });

  std::size_t M = 1;
  while (M < nn || M * p.h / 8 < rule.period)
    M *= 2;
  const double dy = rule.period / M;
  const long J = static_cast<long>(std::floor(y_max / dy + 1e-9));
  YSlab s;
  s.t = t;
  s.x.assign(xs.begin(), xs.end());
  for (long j = -J; j <= J; ++j)
    s.y.push_back(j * dy);
  s.values.assign(xs.size() * s.y.size(), 0);

  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lk(g_fftw_mutex);
    fftw_complex *a = fftw_alloc_complex(M);
    plan = fftw_plan_dft_1d(M, a, a, FFTW_BACKWARD, FFTW_ESTIMATE);
    fftw_free(a);
  }
  const double base = rule.nodes.front().th[0];
  parallel_for(xs.size(), [&](std::size_t ix) {
    fftw_complex *buf = fftw_alloc_complex(M);
    for (std::size_t i = 0; i < M; ++i)
      buf[i][0] = buf[i][1] = 0;
    for (std::size_t n = 0; n < nn; ++n) {
      cplx gsum = 0;
      const ThetaNode &nd = rule.nodes[n];
      for (int k = 0; k < ke[n]; ++k)
        gsum += coef[n][k] * std::polar(1.0, t * rho[n][k] / p.h) *
                tab.ai(nd.u * xs[ix] - zt->zeros[k]);
      buf[n][0] = gsum.real();
      buf[n][1] = gsum.imag();
    }
    fftw_execute_dft(plan, buf, buf);
    const long Ml = static_cast<long>(M);
    for (std::size_t iy = 0; iy < s.y.size(); ++iy) {
      const long j = static_cast<long>(iy) - J;
      const long jp = ((j % Ml) + Ml) % Ml, jm = ((-j % Ml) + Ml) % Ml;
      const double y = s.y[iy];
      const cplx fp = std::polar(1.0, y * base / p.h) * cplx(buf[jp][0], buf[jp][1]);
      const cplx fm = std::polar(1.0, -y * base / p.h) * cplx(buf[jm][0], buf[jm][1]);
      s.values[ix * s.y.size() + iy] = fp + fm;
    }
    fftw_free(buf);
  });
  {
    std::lock_guard<std::mutex> lk(g_fftw_mutex);
    fftw_destroy_plan(plan);
  }
  return s;
}

cplx TestBump::eval(double x, double y, double h) const {
  const double b = bump((x - x0) / radius) * bump((y - y0) / radius);
  if (b == 0)
    return 0;
  return amplitude * b * std::polar(1.0, (xi0 * x + eta0 * y) / h);
}

DeltaRecovery delta_recovery(const WaveParams &p, const TestBump &f) {
  p.validate();
  if (p.d != 2)
    throw DomainError("delta_recovery: d = 2 only");
  if (!(f.radius > 0))
    throw DomainError("delta_recovery: radius must be positive");
  if (f.x0 - f.radius < std::cbrt(p.h * p.h))
    throw DomainError("delta_recovery: test function within h^{2/3} of the boundary");
  DeltaRecovery out;
  if (f.amplitude == 0)
    return out;

  // Pairing against the t = 0 field on a Nyquist grid covering the support.
  const double step = p.h / 8;
  Grid g;
  g.t = {0.0};
  g.x = Grid::span(f.x0 - f.radius, f.x0 + f.radius, step);
  g.y = Grid::span(-f.y0 - f.radius, -f.y0 + f.radius, step);
  const ComplexField P0 = spectral_green(p, g, 0);
  const double dx = g.x[1] - g.x[0], dy = g.y[1] - g.y[0];
  cplx acc = 0;
  for (std::size_t ix = 0; ix < g.x.size(); ++ix)
    for (std::size_t iy = 0; iy < g.y.size(); ++iy)
      acc += P0.at(0, ix, iy) * f.eval(g.x[ix], -g.y[iy], p.h);
  out.pairing = acc * dx * dy / (2 * M_PI);

  // Frozen-coefficient multiplier: (2π)^{-2} ∫∫ e^{iaξ} W(ξ, η) f̂(ξ, η).
  const QuadRule ur = trapezoid(-1, 1, 4001);
  auto bhat = [&](double s) {
    double v = 0;
    for (std::size_t i = 0; i < ur.size(); ++i)
      v += ur.w[i] * bump(ur.x[i]) * std::cos(ur.x[i] * s);
    return v;
  };
  const double r = f.radius;
  const double dz = 0.25 / (r + std::abs(p.a - f.x0) + std::abs(f.y0));
  const double xmax = (1 + p.delta) / p.h;
  const double qa = 1 + p.qform[0] * p.a;
  const int nxi = static_cast<int>(std::ceil(2 * xmax / dz));
  const int neta = static_cast<int>(std::ceil(2 * p.delta / p.h / dz));
  std::vector<cplx> fx(nxi + 1);
  std::vector<double> xi(nxi + 1);
  for (int i = 0; i <= nxi; ++i) {
    xi[i] = -xmax + 2 * xmax * i / nxi;
    const double s = xi[i] - f.xi0 / p.h;
    fx[i] = r * bhat(r * s) * std::polar(1.0, p.a * xi[i] - f.x0 * s);
  }
  const double wxi = 2 * xmax / nxi;
  const double weta = 2 * p.delta / p.h / neta;
  cplx orc = 0;
  for (int sgn : {-1, 1})
    for (int j = 1; j < neta; ++j) {
      const double eta = sgn * ((1 - p.delta) / p.h + j * weta);
      const double we = p.psi(p.h * std::abs(eta));
      if (we == 0)
        continue;
      const double s = eta - f.eta0 / p.h;
      const cplx fy = r * bhat(r * s) * std::polar(1.0, -f.y0 * s);
      cplx row = 0;
      for (int i = 1; i < nxi; ++i) {
        const double W = p.psi(p.h * std::sqrt(xi[i] * xi[i] + qa * eta * eta));
        if (W != 0)
          row += W * fx[i];
      }
      orc += we * fy * row;
    }
  out.oracle = f.amplitude * orc * wxi * weta / (4 * M_PI * M_PI);
  out.discrepancy = std::abs(out.pairing - out.oracle);
  return out;
}

double delta_recovery_test(const WaveParams &p, const TestBump &f) {
  return delta_recovery(p, f).discrepancy;
}

} // namespace glancing
