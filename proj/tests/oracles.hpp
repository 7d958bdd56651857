// Independent oracles used by the unit and acceptance suites. Everything here
// recomputes expected values from first principles (finite differences, grid
// scans, pseudo-inverses, exhaustive enumeration) without touching the
// implementation paths under test.
#ifndef RCEPC_TESTS_ORACLES_HPP
#define RCEPC_TESTS_ORACLES_HPP

#include <functional>

#include "rcepc/types.hpp"

namespace rcepc::oracles {

// Central-difference Wirtinger gradient of a real cost over a complex matrix:
// entry (n, m) is d/dRe / 2 - i * d/dIm / 2.
inline CMat fd_gradient(const std::function<double(const CMat&)>& cost,
                        const CMat& point, double h) {
  CMat grad(point.rows(), point.cols());
  for (Eigen::Index n = 0; n < point.rows(); ++n) {
    for (Eigen::Index m = 0; m < point.cols(); ++m) {
      CMat p = point;
      p(n, m) = point(n, m) + Complex(h, 0.0);
      const double re_plus = cost(p);
      p(n, m) = point(n, m) - Complex(h, 0.0);
      const double re_minus = cost(p);
      p(n, m) = point(n, m) + Complex(0.0, h);
      const double im_plus = cost(p);
      p(n, m) = point(n, m) - Complex(0.0, h);
      const double im_minus = cost(p);
      const double d_re = (re_plus - re_minus) / (2.0 * h);
      const double d_im = (im_plus - im_minus) / (2.0 * h);
      grad(n, m) = Complex(d_re / 2.0, -d_im / 2.0);
    }
  }
  return grad;
}

inline CVec fd_gradient_vec(const std::function<double(const CVec&)>& cost,
                            const CVec& point, double h) {
  auto wrapped = [&](const CMat& m) { return cost(m.col(0)); };
  return fd_gradient(wrapped, point, h).col(0);
}

// Grid-scan minimizer of a 1-D objective over [0, upper] at the given
// resolution.
inline double scan_min(const std::function<double(double)>& objective,
                       double upper, double resolution) {
  double best_x = 0.0;
  double best_v = objective(0.0);
  for (double x = resolution; x <= upper; x += resolution) {
    const double v = objective(x);
    if (v < best_v) {
      best_v = v;
      best_x = x;
    }
  }
  return best_x;
}

// Minimum-norm least-squares solution of H x = s / f via SVD.
inline CVec pinv_solution(const CMat& channel, const CVec& symbol, double f) {
  Eigen::JacobiSVD<CMat> svd(channel,
                             Eigen::ComputeThinU | Eigen::ComputeThinV);
  return svd.solve(symbol) / f;
}

}  // namespace rcepc::oracles

#endif
