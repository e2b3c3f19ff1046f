#pragma once

#include "conformal/curve.hpp"

#include <string>
#include <vector>

namespace conformal {

enum class GrowthKind { AtMostLinear, Superlinear, Indeterminate };

const char* to_string(GrowthKind k);

/// Envelope constants certified on every sample:
///   AtMostLinear: f <= c1 d + c2,  Superlinear: f >= c1 d^(1+eps) + c2,
/// with d the arc-length parameter along the rays.
struct GrowthClass {
  GrowthKind kind = GrowthKind::Indeterminate;
  double c1 = 0;
  double c2 = 0;
  double eps = 0;
  double fit_residual = 0;
  std::vector<double> slopes;  // per-ray log-log slope over the last decade
  std::string note;
};

struct GrowthOptions {
  int samples_per_ray = 400;
  double min_horizon = 100;
  /// Largest per-ray log-log slope still treated as linear.
  double linear_slope_max = 1.05;
  /// The linear envelope sup (f - f0)/d over [T/2, T] may exceed the one over
  /// [T/20, T/2] by at most this factor.
  double envelope_growth = 1.05;
  /// eps = slope - 1 - eps_margin must be at least eps_min.
  double eps_margin = 0.05;
  double eps_min = 0.1;
  double residual_max = 0.05;
};

/// Classifies the growth of f along arc-length rays emanating from x0.
GrowthClass fit_growth(const ScalarFieldd& f, const MetricChartd& metric, const Vecd& x0,
                       const std::vector<CurvePath>& rays, const GrowthOptions& options = {});
GrowthClass fit_growth(const ScalarFieldd& f, const MetricChartd& metric, const Vecd& x0,
                       const std::vector<const CurvePath*>& rays, const GrowthOptions& options = {});

}  // namespace conformal
