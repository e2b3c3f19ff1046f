#pragma once

#include "conformal/completeness.hpp"
#include "conformal/tensor.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace conformal {

/// Pointwise h-norm of s with a running supremum over the points sampled
/// through `sample`. Evaluation via operator() does not touch the estimate.
class NormField {
 public:
  NormField(SymTensorFieldd s, MetricChartd h) : s_(std::move(s)), h_(std::move(h)) {}

  double operator()(const Vecd& x) const { return tensor_norm(s_, h_, x); }
  double sample(const Vecd& x);

  /// Lower estimate of sup_x |||s|||_x over the sample set.
  double sup_estimate() const { return sup_; }
  const Vecd& sup_point() const { return sup_point_; }
  const std::vector<Vecd>& samples() const { return samples_; }

 private:
  SymTensorFieldd s_;
  MetricChartd h_;
  double sup_ = 0;
  Vecd sup_point_;
  std::vector<Vecd> samples_;
};

/// h' = h (1 - |||s|||^2), the conformal transform of h by 1/sqrt(1 - |||s|||^2).
MetricChartd derived_conformal_metric(const MetricChartd& h, const SymTensorFieldd& s);

/// The factor 1/sqrt(1 - |||s|||^2) as a scalar field.
ScalarFieldd corollary_factor(const MetricChartd& h, const SymTensorFieldd& s);

enum class CorollaryMode { Integral, Inequality };

const char* to_string(CorollaryMode m);

struct CorollaryConstants {
  double c1 = 1;
  double c2 = 1;
};

/// Constants as a function of the base point (they may depend on it).
using ConstantsFn = std::function<CorollaryConstants(const Vecd& x0)>;
/// d_h(x, x0); when absent the checker uses the distance_estimate upper bound.
using DistanceFn = std::function<double(const Vecd& x, const Vecd& x0)>;

struct CorollaryOptions {
  VerdictConfig verdict;
  /// Points per ray in inequality mode (grid nodes are subsampled evenly).
  int samples_per_ray = 200;
  double tol = 1e-12;
  DistanceFn distance;
};

struct CorollaryReport {
  CorollaryMode mode = CorollaryMode::Inequality;
  bool pass = false;
  double worst_margin = 0;  // inequality mode: min of (1 - 1/(c1 d + c2)^2) - |||s|||^2
  Vecd witness_point;       // where the worst margin (or the witness ray start) sits
  double sup_norm_estimate = 0;
  int points_checked = 0;
  std::optional<CompletenessVerdict> verdict;  // integral mode
  std::string note;
};

/// Checks that g = h - s is complete. Integral mode runs the completeness
/// verdict on (h, 1/sqrt(1 - |||s|||^2)) with the rays as extra curves;
/// inequality mode checks |||s|||^2 <= 1 - 1/(c1 d_h(x, x0) + c2)^2 along the rays.
CorollaryReport corollary_check(const MetricChartd& h, const SymTensorFieldd& s, const Vecd& x0,
                                const std::vector<CurvePath>& rays, CorollaryMode mode, const ConstantsFn& constants,
                                const CorollaryOptions& options = {});

}  // namespace conformal
