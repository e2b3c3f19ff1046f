#include "conformal/escape.hpp"

#include <algorithm>
#include <cmath>

namespace conformal {

Exhaustion Exhaustion::geometric(Vecd center, int shells, double first_radius, double radius_ratio,
                                 double first_margin, double margin_ratio) {
  Exhaustion e;
  e.center = std::move(center);
  double r = first_radius, m = first_margin;
  for (int n = 0; n < shells; ++n) {
    e.radii.push_back(r);
    e.margins.push_back(m);
    r *= radius_ratio;
    m *= margin_ratio;
  }
  e.validate();
  return e;
}

void Exhaustion::validate() const {
  if (radii.empty() || radii.size() != margins.size())
    throw ConfigurationError("exhaustion needs matching, non-empty radius and margin schedules");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0) || !(margins[i] > 0)) throw ConfigurationError("exhaustion schedules must be positive");
    if (i > 0 && !(radii[i] > radii[i - 1])) throw ConfigurationError("exhaustion radii must strictly increase");
    if (i > 0 && !(margins[i] < margins[i - 1])) throw ConfigurationError("exhaustion margins must strictly decrease");
  }
}

const char* to_string(EscapeMode m) {
  switch (m) {
    case EscapeMode::None:
      return "none";
    case EscapeMode::UnboundedCoordinate:
      return "unbounded-coordinate";
    case EscapeMode::ApproachesExcludedSet:
      return "approaches-excluded-set";
    case EscapeMode::ApproachesDomainBoundary:
      return "approaches-domain-boundary";
  }
  return "unknown";
}

namespace {

struct Violations {
  double radius, puncture, boundary;  // > 0 means outside the shell for that constraint
  double worst() const { return std::max({radius, puncture, boundary}); }
};

Violations shell_violation(const Vecd& x, const Exhaustion& ex, const Domaind& dom, std::size_t n) {
  const double r = dom.radius(x, ex.center);
  const double p = dom.puncture_distance(x);
  const double b = dom.boundary_distance(x);
  const double eps = ex.margins[n];
  return {r / ex.radii[n] - 1.0, std::isfinite(p) ? (eps - p) / eps : -1.0,
          std::isfinite(b) ? (eps - b) / eps : -1.0};
}

}  // namespace

EscapeReport escape_monitor(const CurvePath& curve, const Exhaustion& ex, const Domaind& dom) {
  curve.validate();
  ex.validate();
  EscapeReport rep;
  const std::size_t shells = ex.shells();
  const std::size_t npts = curve.size();

  // Shells that contain the starting point; smaller ones are skipped (K_0 = {x0}).
  std::size_t first_shell = 0;
  while (first_shell < shells && shell_violation(curve.points.front(), ex, dom, first_shell).worst() > 0)
    ++first_shell;

  // K_{n-1} is inside K_n, so the first exit from K_n comes no earlier than
  // the first exit from K_{n-1}; each scan resumes where the last one stopped.
  std::vector<std::size_t> exit_index;
  std::size_t resume = 1;
  for (std::size_t n = first_shell; n < shells; ++n) {
    double prev = shell_violation(curve.points[resume - 1], ex, dom, n).worst();
    std::size_t hit = npts;
    double t_cross = 0;
    for (std::size_t i = resume; i < npts; ++i) {
      const double cur = shell_violation(curve.points[i], ex, dom, n).worst();
      if (cur > 0) {
        hit = i;
        const double w = prev / (prev - cur);  // linear interpolation of the violation
        t_cross = curve.params[i - 1] + std::clamp(w, 0.0, 1.0) * (curve.params[i] - curve.params[i - 1]);
        break;
      }
      prev = cur;
    }
    if (hit == npts) break;
    resume = hit;
    rep.crossing_params.push_back(t_cross);
    rep.crossing_shells.push_back(static_cast<int>(n));
    exit_index.push_back(hit);
  }

  const std::size_t k = rep.crossing_params.size();
  if (k < static_cast<std::size_t>(kEscapeTailShells)) return rep;

  // Re-trapping check: after leaving shell m-2 the curve must stay outside it.
  const std::size_t guard = static_cast<std::size_t>(rep.crossing_shells[k - kEscapeTailShells]);
  bool stays_out = true;
  for (std::size_t i = exit_index[k - kEscapeTailShells]; i < npts; ++i)
    if (shell_violation(curve.points[i], ex, dom, guard).worst() <= 0) {
      stays_out = false;
      break;
    }
  rep.monotone_tail = stays_out;
  rep.escaped = stays_out;
  if (!rep.escaped) return rep;

  const Violations v =
      shell_violation(curve.points.back(), ex, dom, static_cast<std::size_t>(rep.crossing_shells.back()));
  if (v.puncture >= v.radius && v.puncture >= v.boundary)
    rep.mode = EscapeMode::ApproachesExcludedSet;
  else if (v.boundary >= v.radius)
    rep.mode = EscapeMode::ApproachesDomainBoundary;
  else
    rep.mode = EscapeMode::UnboundedCoordinate;
  return rep;
}

}  // namespace conformal
