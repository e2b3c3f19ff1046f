#pragma once

#include <functional>
#include <string>
#include <vector>

namespace conformal {

enum class IntegralKind { Converges, Diverges, Inconclusive };
enum class DivergenceRate { None, Logarithmic, Power, Faster };

const char* to_string(IntegralKind k);
const char* to_string(DivergenceRate r);

struct IntegralVerdict {
  IntegralKind kind = IntegralKind::Inconclusive;
  double value = 0;  // extrapolated limit when Converges
  DivergenceRate rate = DivergenceRate::None;
  double rate_exponent = 0;  // Power: truncations grow like T^rate_exponent
  std::vector<double> horizons;
  std::vector<double> truncations;
  std::string note;
};

struct ClassifierOptions {
  /// Relative stability of the extrapolated limit across the window.
  double tol = 1e-4;
  /// Increment ratios I(T_{k+2})-I(T_{k+1}) over I(T_{k+1})-I(T_k) at or
  /// below this mean geometric shrinking (convergence).
  double converge_ratio = 0.92;
  /// Ratios at or above this (with increments bounded below) mean divergence.
  double diverge_ratio = 0.95;
  /// Lower bound the last increments must clear to count as divergent. When
  /// zero, any increment that is not negligible against the truncation counts.
  double min_increment = 0;
  /// Number of trailing ratios examined.
  int window = 3;
};

/// T_k = 10 * 2^k for all k with T_k <= max_horizon.
std::vector<double> default_horizons(double max_horizon);

/// T_k = L (1 - 2^-k), k = 1..count: for curves that reach the end of the
/// manifold at finite parameter L.
std::vector<double> finite_end_horizons(double length, int count = 12);

/// Classifies lim I(T_k) from precomputed truncations (nondecreasing).
IntegralVerdict classify_truncations(const std::vector<double>& horizons, const std::vector<double>& truncations,
                                     const ClassifierOptions& options = {});

/// Integrates a positive integrand of arc length over [0, T_k] by adaptive
/// quadrature and classifies the truncations.
IntegralVerdict classify_improper_integral(const std::function<double(double)>& integrand,
                                           const std::vector<double>& horizons, const ClassifierOptions& options = {});

}  // namespace conformal
