#pragma once

#include "conformal/curve.hpp"
#include "conformal/escape.hpp"

#include <cstdint>
#include <vector>

namespace conformal {

struct GeodesicOptions {
  double atol = 1e-9;
  double rtol = 1e-9;
  double fd_step = 0.0;  // Christoffel finite-difference step; 0 = default per coordinate
  // Grid caps in metric arc-length units: a step never exceeds
  // max(max_step_floor, max_step_relative * s).
  double max_step_floor = 0.05;
  double max_step_relative = 0.02;
  // Integration stops this close (coordinate distance) to a puncture or boundary.
  double stop_margin = 1e-9;
  std::size_t max_steps = 5'000'000;
};

/// Solves x'' + Gamma(x)(x', x') = 0 from (x0, v0) up to affine parameter
/// `horizon`, or until the curve reaches a stop margin. The returned path is
/// affinely parametrized from 0; `end` and `diagnostic` record why it stopped.
CurvePath integrate_geodesic(const MetricChartd& metric, const Vecd& x0, const Vecd& v0, double horizon,
                             const GeodesicOptions& options = {});

/// Variant with a single absolute/relative tolerance.
CurvePath integrate_geodesic(const MetricChartd& metric, const Vecd& x0, const Vecd& v0, double horizon, double tol);

/// Max |g(v,v) - g(v0,v0)| over the grid.
double speed_drift(const CurvePath& curve, const MetricChartd& metric);

struct SprayRay {
  Vecd direction;  // unit g-velocity at x0
  CurvePath path;  // arc-length parametrized
  EscapeReport escape;
};

struct SprayOptions {
  GeodesicOptions geodesic;
  ExhaustionSchedule exhaustion;
  /// Also shoot along +-each coordinate axis (unit g-speed) before the random
  /// directions.
  bool include_axis_rays = false;
  /// Worker threads; 0 = hardware concurrency.
  unsigned threads = 0;
};

/// Unit g-vectors at x0: Euclidean-uniform directions on the sphere pushed
/// through the inverse Cholesky factor of G(x0). Deterministic per seed.
std::vector<Vecd> sample_unit_directions(const MetricChartd& metric, const Vecd& x0, int count, std::uint64_t seed);

/// Integrates `count` geodesic rays from x0 with random unit g-velocities,
/// reparametrizes them by arc length and runs the escape monitor on each
/// (exhaustion centered at x0). Results are in index order.
std::vector<SprayRay> spray_rays(const MetricChartd& metric, const Vecd& x0, int count, double horizon,
                                 std::uint64_t seed, const SprayOptions& options = {});

struct DistanceBudget {
  int shooting_iterations = 30;
  int relaxation_iterations = 300;
  int relaxation_nodes = 24;
  int segment_nodes = 65;  // nodes for length quadrature of straight segments
  double tolerance = 1e-10;
};

struct DistanceEstimate {
  double upper_bound = 0;
  /// First-order optimality gap of the returned path: endpoint residual for
  /// shooting, gradient norm for relaxation.
  double gap = 0;
  bool gap_large = false;
  std::string method;
};

/// Upper bound on d_g(x, y): the shortest of the coordinate segment, a shot
/// geodesic (Newton on the initial velocity) and, when shooting fails, a
/// relaxed piecewise-linear path.
DistanceEstimate distance_estimate(const MetricChartd& metric, const Vecd& x, const Vecd& y,
                                   const DistanceBudget& budget = {});

}  // namespace conformal
