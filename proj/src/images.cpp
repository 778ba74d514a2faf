#include "glancing/images.hpp"

#include "glancing/errors.hpp"
#include "glancing/parallel.hpp"
#include "glancing/quadrature.hpp"
#include "synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace glancing {

namespace {

using detail::RowMatC;

// ---- Airy–Poisson -----------------------------------------------------------

double tapered_lhs(const OmegaTestFn &phi, int Nm) {
  const double top = std::max(phi.hi, 1.0);
  const double lp_max = 2.1 * std::sqrt(top) + 1;
  const double rate = Nm * lp_max + 200 / (phi.hi - phi.lo) + 20;
  const double dw = 2 * M_PI / (1.25 * rate);
  const int n = std::max(8, static_cast<int>(std::ceil((phi.hi - phi.lo) / dw)));
  const QuadRule q = trapezoid(phi.lo, phi.hi, n + 1);
  std::vector<double> sig(Nm + 1);
  for (int N = 1; N <= Nm; ++N)
    sig[N] = flat_top(static_cast<double>(N) / Nm);
  std::vector<double> part(q.size());
  parallel_for(q.size(), [&](std::size_t j) {
    const double fj = phi.f(q.x[j]);
    if (fj == 0) {
      part[j] = 0;
      return;
    }
    const double L = phase_L(q.x[j]).value;
    // 1 + 2 Σ σ_N cos(N L) by the Chebyshev recurrence.
    const double c1 = std::cos(L);
    double cm = 1, c = c1, s = 1;
    for (int N = 1; N <= Nm && sig[N] > 0; ++N) {
      s += 2 * sig[N] * c;
      const double cn = 2 * c1 * c - cm;
      cm = c;
      c = cn;
    }
    part[j] = q.w[j] * fj * s;
  });
  double lhs = 0;
  for (double v : part)
    lhs += v;
  return lhs;
}

// ---- reflected waves --------------------------------------------------------

struct OmegaRule {
  std::vector<double> w, wq, L; // nodes, trapezoid weights, L(ω)
  double top = 0;
};

OmegaRule omega_rule(const WaveParams &p, const ThetaRule &rule, double t_max,
                     int n_abs, const ImageOptions &opt) {
  const double h23 = std::cbrt(p.h * p.h);
  double top = 0, q23max = 0;
  for (const ThetaNode &nd : rule.nodes) {
    if (nd.w == 0)
      continue;
    const double r2 = (1 + p.delta) * (1 + p.delta) - nd.norm * nd.norm;
    top = std::max(top, r2 / nd.q23 / h23);
    q23max = std::max(q23max, nd.q23);
  }
  OmegaRule o;
  o.top = top;
  if (top <= opt.omega_lo)
    return o;
  const double lp_max = std::max(2.1 * std::sqrt(std::max(top, 0.0)), 2.5);
  const double rate = n_abs * lp_max +
                      t_max * q23max * std::cbrt(1 / p.h) / (2 * (1 - p.delta)) +
                      2 * std::sqrt(std::max(top, 0.0)) + 10;
  const double dw = 2 * M_PI / (opt.band_margin * rate);
  const int n = std::max(8, static_cast<int>(std::ceil((top - opt.omega_lo) / dw)));
  const QuadRule q = trapezoid(opt.omega_lo, top, n + 1);
  o.w = q.x;
  o.wq = q.w;
  o.L.resize(q.size());
  const auto L = phase_L_tracked(o.w);
  for (std::size_t j = 0; j < q.size(); ++j)
    o.L[j] = L[j].value;
  return o;
}

struct TermBatch {
  std::vector<ImageTermStat> stats; // ascending N
  RowMatC sum;                      // Σ_N V_N, summed in ascending N
  int omega_nodes = 0;
  int theta_nodes = 0;
  double omega_top = 0;
};

double cell_volume(const Grid &g) {
  double v = 1;
  for (const auto *ax : {&g.t, &g.x, &g.y, &g.y2})
    if (ax->size() > 1)
      v *= std::abs((*ax)[1] - (*ax)[0]);
  return v;
}

ImageTermStat term_stat(int N, const RowMatC &F, double cell) {
  ImageTermStat s;
  s.N = N;
  for (Eigen::Index i = 0; i < F.size(); ++i) {
    const double a = std::abs(F.data()[i]);
    if (!std::isfinite(a))
      throw PrecisionError("image term is not finite");
    s.sup = std::max(s.sup, a);
    s.l2 += a * a;
  }
  s.l2 = std::sqrt(s.l2 * cell);
  return s;
}

TermBatch compute_terms(const WaveParams &p, const Grid &g, int N_lo, int N_hi,
                        const ImageOptions &opt) {
  const Extent e = extent_of(g);
  const ThetaRule rule = theta_rule(p, e, opt.theta);
  const int n_abs = std::max(std::abs(N_lo), std::abs(N_hi));
  const OmegaRule om = omega_rule(p, rule, e.t_max, n_abs, opt);
  const AiryTable &tab = AiryTable::instance();
  const double h23 = std::cbrt(p.h * p.h);
  const double hfac = std::pow(p.h, -(p.d - 1));
  const std::size_t nt = g.t.size(), nx = g.x.size(), M = nt * nx;
  const std::size_t nn = rule.nodes.size();
  const int nN = N_hi - N_lo + 1;

  std::vector<Eigen::MatrixXcd> Gall(nN, Eigen::MatrixXcd::Zero(M, nn));
  parallel_for(nn, [&](std::size_t n) {
    const ThetaNode &nd = rule.nodes[n];
    if (nd.w == 0)
      return;
    std::vector<std::size_t> J;
    std::vector<double> rho, coef;
    for (std::size_t j = 0; j < om.w.size(); ++j) {
      const double r2 = nd.norm * nd.norm + h23 * om.w[j] * nd.q23;
      if (r2 <= 0)
        continue;
      const double r = std::sqrt(r2);
      const double W = p.psi(r);
      if (W == 0)
        continue;
      J.push_back(j);
      rho.push_back(r);
      coef.push_back(om.wq[j] * nd.w * W * hfac * nd.u *
                     tab.ai(nd.u * p.a - om.w[j]));
    }
    const std::size_t nj = J.size();
    if (nj == 0)
      return;
    Eigen::MatrixXd A(nj, nx);
    for (std::size_t j = 0; j < nj; ++j)
      for (std::size_t ix = 0; ix < nx; ++ix)
        A(j, ix) = tab.ai(nd.u * g.x[ix] - om.w[J[j]]);
    Eigen::MatrixXcd P(nt, nj);
    for (std::size_t it = 0; it < nt; ++it)
      for (std::size_t j = 0; j < nj; ++j)
        P(it, j) = coef[j] * std::polar(1.0, g.t[it] * rho[j] / p.h);
    Eigen::MatrixXcd AN(nj, nx);
    for (int iN = 0; iN < nN; ++iN) {
      const int N = N_lo + iN;
      for (std::size_t j = 0; j < nj; ++j) {
        const cplx z = std::polar(1.0, -N * om.L[J[j]]);
        for (std::size_t ix = 0; ix < nx; ++ix)
          AN(j, ix) = z * A(j, ix);
      }
      const Eigen::MatrixXcd G = P * AN;
      for (std::size_t it = 0; it < nt; ++it)
        for (std::size_t ix = 0; ix < nx; ++ix)
          Gall[iN](it * nx + ix, n) = G(it, ix);
    }
  });

  TermBatch b;
  b.omega_nodes = static_cast<int>(om.w.size());
  b.theta_nodes = static_cast<int>(nn);
  b.omega_top = om.top;
  const double cell = cell_volume(g);
  b.sum.setZero(M, g.y.size() * g.y2.size());
  RowMatC F;
  for (int iN = 0; iN < nN; ++iN) {
    detail::synthesize_matrix(rule, g, p.h, Gall[iN], F);
    Gall[iN].resize(0, 0);
    b.stats.push_back(term_stat(N_lo + iN, F, cell));
    b.sum += F;
  }
  return b;
}

bool ends_converged(const std::vector<ImageTermStat> &st, double thr) {
  const std::size_t n = st.size();
  if (n < 3)
    return false;
  for (std::size_t i = 0; i < 3; ++i)
    if (st[i].sup >= thr || st[n - 1 - i].sup >= thr)
      return false;
  return true;
}

} // namespace

OmegaTestFn omega_bump(double center, double halfwidth, double amplitude) {
  if (!(halfwidth > 0))
    throw DomainError("omega_bump: halfwidth must be positive");
  OmegaTestFn t;
  t.lo = center - halfwidth;
  t.hi = center + halfwidth;
  t.f = [=](double w) { return amplitude * bump((w - center) / halfwidth); };
  std::ostringstream os;
  os.precision(17);
  os << "bump(center=" << center << ", halfwidth=" << halfwidth
     << ", amplitude=" << amplitude << ")";
  t.label = os.str();
  return t;
}

AiryPoissonReport airy_poisson_check(const OmegaTestFn &phi, int N_max,
                                     double tol, int N_max_cap) {
  if (!(phi.lo < phi.hi) || !std::isfinite(phi.lo) || !std::isfinite(phi.hi) ||
      !phi.f)
    throw DomainError("airy_poisson_check: need a finite support lo < hi");
  if (N_max < 1 || !(tol > 0))
    throw DomainError("airy_poisson_check: need N_max >= 1 and tol > 0");
  const int K = zero_count_below(phi.hi);
  if (K > 100000)
    throw DomainError("airy_poisson_check: support beyond the zero table");
  const auto zt = shared_zero_table(K);

  AiryPoissonReport r;
  r.test_fn = phi.label;
  r.taper_width = 0.5;
  for (int k = 0; k < K; ++k) {
    const double w = zt->zeros[k];
    if (w > phi.lo && w < phi.hi) {
      r.rhs += 2 * M_PI * phi.f(w) / zt->lprimes[k];
      ++r.K_max;
    }
  }
  int Nm = N_max;
  double prev = tapered_lhs(phi, std::max(1, Nm / 2));
  for (;;) {
    r.lhs = tapered_lhs(phi, Nm);
    r.N_max = Nm;
    r.tail_estimate = std::abs(r.lhs - prev);
    r.abs_discrepancy = std::abs(r.lhs - r.rhs);
    if (r.abs_discrepancy <= tol)
      return r;
    if (2 * Nm > N_max_cap) {
      std::ostringstream os;
      os << "airy_poisson_check: tolerance " << tol << " not reached at N_max="
         << Nm << ", achieved discrepancy " << r.abs_discrepancy;
      throw PrecisionError(os.str());
    }
    prev = r.lhs;
    Nm *= 2;
  }
}

ImageSum image_green(const WaveParams &p, const Grid &g, const ImageOptions &opt,
                     int N_lo, int N_hi) {
  ImageSum out;
  out.field = ComplexField(p, g);
  if (!(opt.stop_ratio > 0) || !(opt.band_margin >= 1) || opt.N_cap < 1)
    throw ConfigError("ImageOptions: invalid truncation settings");
  // Every mode vanishes at a source on the boundary, so the sum is zero; the
  // individual V_N do not decay in N there and the scan below cannot close.
  if (p.a == 0)
    return out;
  const bool fixed = N_lo <= N_hi;
  if (!fixed) {
    const Extent e = extent_of(g);
    const double sa = std::sqrt(std::max(p.a, 1e-4));
    N_lo = -3;
    N_hi = std::min(opt.N_cap, static_cast<int>(std::floor(e.t_max / (4 * sa))) + 3);
  }
  for (;;) {
    if (N_hi - N_lo + 1 > opt.N_cap)
      throw PrecisionError("image_green: N range exceeds the term cap");
    TermBatch b = compute_terms(p, g, N_lo, N_hi, opt);
    std::vector<ImageTermStat> st = std::move(b.stats);
    double mx = 0;
    for (const auto &s : st)
      mx = std::max(mx, s.sup);
    const double thr = opt.stop_ratio * mx;
    if (!fixed && mx > 0 && !ends_converged(st, thr)) {
      const int grow = std::max(3, (N_hi - N_lo) / 2);
      const std::size_t n = st.size();
      if (st[n - 1].sup >= thr || st[n - 2].sup >= thr || st[n - 3].sup >= thr)
        N_hi += grow;
      if (st[0].sup >= thr || st[1].sup >= thr || st[2].sup >= thr)
        N_lo -= grow;
      continue;
    }
    std::copy(b.sum.data(), b.sum.data() + b.sum.size(), out.field.values.begin());
    out.terms = std::move(st);
    out.stop_threshold = thr;
    out.field.truncation.N_min = N_lo;
    out.field.truncation.N_max = N_hi;
    out.field.truncation.theta_nodes = b.theta_nodes;
    out.field.truncation.omega_nodes = b.omega_nodes;
    out.field.truncation.tolerance = opt.stop_ratio;
    double tail = 0;
    const std::size_t n = out.terms.size();
    if (n >= 2)
      tail = std::max(out.terms.front().sup, out.terms.back().sup);
    const double fm = out.field.max_abs();
    out.field.truncation.tail_estimate = fm > 0 ? tail / fm : tail;
    return out;
  }
}

ReflectedWaveTerm v_n_field(const WaveParams &p, int N, const Grid &g,
                            const ImageOptions &opt) {
  ImageSum s = image_green(p, g, opt, N, N);
  ReflectedWaveTerm r;
  r.N = N;
  r.field = std::move(s.field);
  const double h23 = std::cbrt(p.h * p.h);
  const ThetaRule rule = theta_rule(p, extent_of(g), opt.theta);
  double lo = INFINITY, hi = -INFINITY;
  for (const ThetaNode &nd : rule.nodes) {
    if (nd.w == 0)
      continue;
    const double n2 = nd.norm * nd.norm;
    lo = std::min(lo, ((1 - p.delta) * (1 - p.delta) - n2) / nd.q23);
    hi = std::max(hi, ((1 + p.delta) * (1 + p.delta) - n2) / nd.q23);
  }
  r.alpha_lo = std::max(lo, h23 * opt.omega_lo);
  r.alpha_hi = hi;
  return r;
}

EquivalenceReport equivalence_report(const WaveParams &p, const Grid &g,
                                     int N_max, int K_max,
                                     const ImageOptions &opt) {
  // Long t axes are split into slabs of consecutive samples; each slab is
  // itself a Nyquist grid and the ratio of global maxima is unchanged.
  constexpr std::size_t kSlab = 128;
  EquivalenceReport r;
  r.N_min = 1 << 30;
  r.N_max = -(1 << 30);
  double num = 0, den = 0;
  for (std::size_t t0 = 0; t0 < g.t.size(); t0 += kSlab) {
    Grid s = g;
    s.t.assign(g.t.begin() + t0, g.t.begin() + std::min(g.t.size(), t0 + kSlab));
    const ComplexField sp = spectral_green(p, s, K_max, opt.theta);
    const ImageSum im = N_max >= 0 ? image_green(p, s, opt, -N_max, N_max)
                                   : image_green(p, s, opt);
    for (std::size_t i = 0; i < sp.values.size(); ++i) {
      num = std::max(num, std::abs(im.field.values[i] - sp.values[i]));
      den = std::max(den, std::abs(sp.values[i]));
    }
    r.K_max = sp.truncation.K_max;
    r.N_min = std::min(r.N_min, im.field.truncation.N_min);
    r.N_max = std::max(r.N_max, im.field.truncation.N_max);
    r.theta_nodes = std::max(r.theta_nodes, im.field.truncation.theta_nodes);
    r.omega_nodes = std::max(r.omega_nodes, im.field.truncation.omega_nodes);
  }
  r.spectral_max = den;
  r.rel_linf = den > 0 ? num / den : (num == 0 ? 0.0 : INFINITY);
  return r;
}

double equivalence_check(const WaveParams &p, const Grid &g, int N_max,
                         int K_max, const ImageOptions &opt) {
  return equivalence_report(p, g, N_max, K_max, opt).rel_linf;
}

} // namespace glancing
