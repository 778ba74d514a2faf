#pragma once

// Shared by the spectral and image evaluators: the last step of both is a
// sum over θ nodes of a per-node (t, x) block times the tangential factor.

#include "glancing/spectral.hpp"

#include <Eigen/Dense>

#include <functional>

namespace glancing::detail {

using RowMatC = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// e^{iy·θ/h}, or 2cos(yθ/h) for the mirrored d = 2 rule.
inline cplx tangential_factor(const ThetaRule &r, const ThetaNode &n, double y,
                              double y2, double h) {
  if (r.d == 2)
    return 2.0 * std::cos(y * n.th[0] / h);
  const double ph = (y * n.th[0] + y2 * n.th[1]) / h;
  return {std::cos(ph), std::sin(ph)};
}

// F(m, j) = Σ_n B_n(m) · tangential_factor(n, y_j) over all nodes, where
// block(n, col) writes B_n (length nt·nx, row index it·nx + ix) into col.
// Nodes are processed in fixed chunks so memory stays bounded and the
// summation order does not depend on the worker count.
void synthesize(const ThetaRule &r, const Grid &g, double h,
                const std::function<void(std::size_t, Eigen::Ref<Eigen::VectorXcd>)> &block,
                RowMatC &F);

// Same with the per-node blocks precomputed as the columns of Gall.
void synthesize_matrix(const ThetaRule &r, const Grid &g, double h,
                       const Eigen::MatrixXcd &Gall, RowMatC &F);

// Airy zeros with at least K entries, or the window default when K <= 0.
int resolve_kmax(const WaveParams &p, int K_max);

} // namespace glancing::detail
