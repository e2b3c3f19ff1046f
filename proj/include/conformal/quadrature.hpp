#pragma once

#include <array>
#include <functional>

namespace conformal {

struct QuadratureResult {
  double value = 0;
  double error = 0;
  int intervals = 0;
  bool converged = true;
};

/// Adaptive Gauss-Kronrod 7-15 on [a, b]; bisects the interval with the
/// largest error estimate until the total estimate is below
/// max(abs_tol, rel_tol * |value|) or max_intervals is hit.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b, double abs_tol = 1e-12,
                                    double rel_tol = 1e-12, int max_intervals = 2000);

/// Three-point Gauss-Legendre nodes and weights on [-1, 1].
inline constexpr std::array<double, 3> kGauss3Nodes = {-0.7745966692414833770, 0.0, 0.7745966692414833770};
inline constexpr std::array<double, 3> kGauss3Weights = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};

}  // namespace conformal
