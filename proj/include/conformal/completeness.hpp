#pragma once

#include "conformal/divergence.hpp"
#include "conformal/geodesic.hpp"
#include "conformal/growth.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace conformal {

inline constexpr std::uint64_t kDefaultSeed = 1729;

/// Integral of (f o gamma) |gamma'|_g over the curve grid (3-point Gauss rule
/// per segment on the Hermite interpolant). For arc-length curves the speed
/// factor is taken as exactly 1.
double weighted_line_integral(const ScalarFieldd& f, const CurvePath& curve, const MetricChartd& metric);

/// The same integral truncated at curve parameter start + T_k for every horizon.
std::vector<double> weighted_truncations(const ScalarFieldd& f, const CurvePath& curve, const MetricChartd& metric,
                                         const std::vector<double>& horizons);

enum class VerdictKind { Complete, Incomplete, Inconclusive };

const char* to_string(VerdictKind k);

struct TruncationTable {
  std::string curve;  // "ray 3", "axis ray 0", "curve 1"
  IntegralVerdict verdict;
};

struct CompletenessVerdict {
  VerdictKind kind = VerdictKind::Inconclusive;
  std::optional<CurvePath> witness;  // arc-length w.r.t. g
  std::string witness_name;
  std::optional<double> length_bound;
  std::optional<GrowthClass> certificate;
  GrowthClass growth;  // the fit, whatever its outcome
  int rays_tested = 0;
  int escaping_curves = 0;
  std::vector<TruncationTable> tables;
  std::vector<std::string> diagnostics;
};

struct VerdictConfig {
  /// Caller's assertion that g itself is complete.
  bool base_complete = true;
  int rays = 64;
  double horizon = 1e4;
  std::uint64_t seed = kDefaultSeed;
  bool include_axis_rays = true;
  /// Additional escaping curves to test (any parametrization).
  std::vector<CurvePath> extra_curves;
  ExhaustionSchedule exhaustion;
  unsigned threads = 0;
  /// Fewer escaping curves than this gives Inconclusive.
  int min_escaping = 2;
  ClassifierOptions classifier;
  GrowthOptions growth;
  GeodesicOptions geodesic;
};

/// Decides whether g / A^2 is complete from a geodesic spray at x0 plus the
/// supplied curves. Any curve with convergent 1/A-length gives Incomplete;
/// Complete additionally requires an at-most-linear growth certificate.
CompletenessVerdict completeness_verdict(const MetricChartd& g, const ScalarFieldd& a, const Vecd& x0,
                                         const VerdictConfig& config = {});

/// r(eps, c1, c2) = integral over [0, inf) of ds / (c1 s^(1+eps) + c2).
double diameter_bound(double eps, double c1, double c2);

}  // namespace conformal
