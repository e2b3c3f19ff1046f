#pragma once

#include "conformal/chart.hpp"

#include <functional>
#include <string>
#include <vector>

namespace conformal {

/// Why a curve's grid stops where it does.
enum class CurveEnd {
  Supplied,          ///< user-built curve, ends where the caller said
  Horizon,           ///< integration reached the requested parameter horizon
  DomainEdge,        ///< stopped at the stop margin of a puncture or boundary
  ChartSingularity,  ///< stopped at the margin of a coordinate singularity
  StepUnderflow,     ///< error control collapsed (metric degeneracy nearby)
  MaxSteps,
};

const char* to_string(CurveEnd e);

/// A discretized regular curve. Between grid nodes the curve is the cubic
/// Hermite interpolant of the stored positions and velocities.
struct CurvePath {
  std::vector<double> params;
  std::vector<Vecd> points;
  std::vector<Vecd> velocities;
  bool arclength = false;
  std::string metric_label;
  CurveEnd end = CurveEnd::Supplied;
  std::string diagnostic;

  std::size_t size() const { return params.size(); }
  int dim() const { return points.empty() ? 0 : static_cast<int>(points.front().size()); }
  double start_param() const { return params.front(); }
  double end_param() const { return params.back(); }

  /// Index i such that params[i] <= t <= params[i+1] (t is clamped).
  std::size_t segment(double t) const;
  Vecd position(double t) const;
  Vecd velocity(double t) const;

  /// Throws InputError unless params are strictly increasing and the three
  /// arrays have matching lengths (>= 2 nodes).
  void validate() const;
};

std::vector<double> linspace(double a, double b, std::size_t n);

/// Sample an analytic curve on the given parameter grid.
CurvePath make_curve(const std::function<Vecd(double)>& position, const std::function<Vecd(double)>& velocity,
                     const std::vector<double>& params, std::string label = "supplied");

/// Length of each segment, sqrt(g(x', x')) integrated by 3-point Gauss rule
/// on the Hermite interpolant.
std::vector<double> segment_lengths(const CurvePath& curve, const MetricChartd& metric);

double curve_length(const CurvePath& curve, const MetricChartd& metric);

/// Relabel the grid by metric arc length (starting at the curve's first
/// parameter) and rescale velocities to unit metric speed. Points are kept.
CurvePath arclength_reparam(const CurvePath& curve, const MetricChartd& metric);

/// Insert (factor - 1) interpolated nodes into every segment.
CurvePath refine(const CurvePath& curve, int factor);

/// Append b to a (b must start where a ends, same parameter).
CurvePath concatenate(const CurvePath& a, const CurvePath& b);

}  // namespace conformal
