#pragma once

#include "conformal/curve.hpp"

#include <vector>

namespace conformal {

/// Nested compacta K_n = { x : |x - center| <= R_n on non-periodic axes,
///                          distance to punctures and boundaries >= eps_n }.
struct Exhaustion {
  Vecd center;
  std::vector<double> radii;    // strictly increasing
  std::vector<double> margins;  // strictly decreasing to 0

  /// R_n = first_radius * ratio^(n-1), eps_n = first_margin * margin_ratio^(n-1), n = 1..shells.
  static Exhaustion geometric(Vecd center, int shells = 48, double first_radius = 2.0, double radius_ratio = 2.0,
                              double first_margin = 0.5, double margin_ratio = 0.5);

  /// The dyadic default: R_n = 2^n, eps_n = 2^-n.
  static Exhaustion dyadic(Vecd center, int shells = 48) { return geometric(std::move(center), shells); }

  std::size_t shells() const { return radii.size(); }
  void validate() const;
};

/// Parameters of a geometric exhaustion, independent of its center.
struct ExhaustionSchedule {
  int shells = 48;
  double first_radius = 2.0;
  double radius_ratio = 2.0;
  double first_margin = 0.5;
  double margin_ratio = 0.5;

  Exhaustion at(Vecd center) const {
    return Exhaustion::geometric(std::move(center), shells, first_radius, radius_ratio, first_margin, margin_ratio);
  }
};

enum class EscapeMode { None, UnboundedCoordinate, ApproachesExcludedSet, ApproachesDomainBoundary };

const char* to_string(EscapeMode m);

struct EscapeReport {
  bool escaped = false;
  /// First-exit parameter from each shell the curve left, innermost first.
  std::vector<double> crossing_params;
  /// Shell index (0-based into the exhaustion) of each crossing.
  std::vector<int> crossing_shells;
  EscapeMode mode = EscapeMode::None;
  /// True when the curve left the last 3 shells it reached and never came back.
  bool monotone_tail = false;
};

/// Shells required for an escape verdict: the last three exits must be
/// monotone with no re-entry.
inline constexpr int kEscapeTailShells = 3;

EscapeReport escape_monitor(const CurvePath& curve, const Exhaustion& exhaustion, const Domaind& domain);

}  // namespace conformal
