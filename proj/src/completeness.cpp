#include "conformal/completeness.hpp"

#include "conformal/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <sstream>

namespace conformal {

const char* to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::Complete:
      return "complete";
    case VerdictKind::Incomplete:
      return "incomplete";
    case VerdictKind::Inconclusive:
      return "inconclusive";
  }
  return "unknown";
}

namespace {

double piece(const ScalarFieldd& f, const CurvePath& c, const MetricChartd& metric, double a, double b) {
  if (!(b > a)) return 0.0;
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double sum = 0;
  for (int q = 0; q < 3; ++q) {
    const double t = mid + half * kGauss3Nodes[q];
    const Vecd x = c.position(t);
    double speed = 1.0;
    if (!c.arclength) {
      const Vecd v = c.velocity(t);
      speed = std::sqrt(std::max(0.0, v.dot(metric.components(x) * v)));
    }
    sum += kGauss3Weights[q] * f(x) * speed;
  }
  return sum * half;
}

}  // namespace

double weighted_line_integral(const ScalarFieldd& f, const CurvePath& curve, const MetricChartd& metric) {
  curve.validate();
  double total = 0;
  for (std::size_t i = 0; i + 1 < curve.size(); ++i) total += piece(f, curve, metric, curve.params[i], curve.params[i + 1]);
  return total;
}

std::vector<double> weighted_truncations(const ScalarFieldd& f, const CurvePath& curve, const MetricChartd& metric,
                                         const std::vector<double>& horizons) {
  curve.validate();
  const double s0 = curve.start_param(), s_end = curve.end_param();
  std::vector<double> out;
  out.reserve(horizons.size());
  double acc = 0;
  std::size_t i = 0;
  double pos = s0;  // integrated up to here
  for (double h : horizons) {
    double t = s0 + h;
    if (t > s_end) {
      if (t > s_end + 1e-9 * std::max(1.0, std::abs(s_end)))
        throw ConfigurationError("weighted_truncations: horizon beyond the end of the curve");
      t = s_end;
    }
    if (t < pos) throw ConfigurationError("weighted_truncations: horizons must increase");
    while (i + 1 < curve.size() && curve.params[i + 1] <= t) {
      acc += piece(f, curve, metric, pos, curve.params[i + 1]);
      pos = curve.params[i + 1];
      ++i;
    }
    const double partial = piece(f, curve, metric, pos, t);
    out.push_back(acc + partial);
    if (t > pos) {
      acc += partial;
      pos = t;
    }
  }
  return out;
}

namespace {

// Half of the smallest increment that 1/(c1 s + c2) produces over the last
// doubling windows of the horizon schedule.
double linear_increment_floor(const std::vector<double>& h, double c1, double c2, int window) {
  double m = std::numeric_limits<double>::infinity();
  const std::size_t first = h.size() > static_cast<std::size_t>(window) + 1 ? h.size() - window - 1 : 0;
  for (std::size_t k = first; k + 1 < h.size(); ++k)
    m = std::min(m, std::log1p(c1 * (h[k + 1] - h[k]) / (c1 * h[k] + c2)) / c1);
  return 0.5 * m;
}

}  // namespace

CompletenessVerdict completeness_verdict(const MetricChartd& g, const ScalarFieldd& a, const Vecd& x0,
                                         const VerdictConfig& cfg) {
  g.domain().require(x0, "completeness_verdict");
  if (!(a(x0) > 0)) throw InvariantViolation("conformal factor is not positive at " + format_point(x0));
  if (cfg.rays < 1) throw ConfigurationError("completeness_verdict: spray size must be >= 1");
  if (!(cfg.horizon > 0)) throw ConfigurationError("completeness_verdict: horizon must be positive");

  CompletenessVerdict out;
  auto diag = [&out](const std::string& s) { out.diagnostics.push_back(s); };

  SprayOptions so;
  so.geodesic = cfg.geodesic;
  so.exhaustion = cfg.exhaustion;
  so.include_axis_rays = cfg.include_axis_rays;
  so.threads = cfg.threads;
  const std::vector<SprayRay> spray = spray_rays(g, x0, cfg.rays, cfg.horizon, cfg.seed, so);
  const int n_axis = cfg.include_axis_rays ? 2 * g.dim() : 0;

  struct Candidate {
    std::string name;
    const CurvePath* path;
    bool finite_end = false;
  };
  std::vector<Candidate> cands;
  std::deque<CurvePath> owned;
  std::vector<const CurvePath*> growth_rays;
  int skipped = 0, trapped = 0;
  bool base_suspect = false;
  for (std::size_t i = 0; i < spray.size(); ++i) {
    const SprayRay& r = spray[i];
    const std::string name = static_cast<int>(i) < n_axis ? "axis ray " + std::to_string(i)
                                                           : "ray " + std::to_string(static_cast<int>(i) - n_axis);
    ++out.rays_tested;
    if (r.path.size() < 2 || r.path.end == CurveEnd::ChartSingularity || r.path.end == CurveEnd::StepUnderflow ||
        r.path.end == CurveEnd::MaxSteps) {
      ++skipped;
      diag(name + " truncated (" + to_string(r.path.end) + ")" +
           (r.path.diagnostic.empty() ? "" : ": " + r.path.diagnostic));
      continue;
    }
    const double len = r.path.end_param() - r.path.start_param();
    if (r.path.end == CurveEnd::Horizon) {
      if (!r.escape.escaped) {
        ++trapped;
        continue;
      }
      growth_rays.push_back(&r.path);
      cands.push_back({name, &r.path, false});
    } else if (r.path.end == CurveEnd::DomainEdge) {
      if (!r.escape.escaped) {
        ++skipped;
        diag(name + " stopped at the domain edge without a monotone escape");
        continue;
      }
      base_suspect = true;
      std::ostringstream s;
      s.precision(17);
      s << name << " leaves every compact set at finite g-length " << len << " (" << to_string(r.escape.mode) << ")";
      diag(s.str());
      cands.push_back({name, &r.path, true});
    }
  }
  if (trapped > 0) diag(std::to_string(trapped) + " rays did not escape by the horizon");
  if (skipped > 0) diag(std::to_string(skipped) + " rays skipped");

  for (std::size_t i = 0; i < cfg.extra_curves.size(); ++i) {
    const std::string name = "curve " + std::to_string(i);
    CurvePath c = cfg.extra_curves[i].arclength ? cfg.extra_curves[i] : arclength_reparam(cfg.extra_curves[i], g);
    const EscapeReport esc = escape_monitor(c, cfg.exhaustion.at(c.points.front()), g.domain());
    if (!esc.escaped) {
      diag(name + " does not escape; ignored");
      continue;
    }
    const bool finite = esc.mode != EscapeMode::UnboundedCoordinate;
    if (finite) base_suspect = true;
    owned.push_back(std::move(c));
    cands.push_back({name, &owned.back(), finite});
  }
  out.escaping_curves = static_cast<int>(cands.size());

  // Growth of A along the full-length rays.
  try {
    out.growth = fit_growth(a, g, x0, growth_rays, cfg.growth);
  } catch (const InsufficientDataError& e) {
    out.growth = GrowthClass{};
    out.growth.note = e.what();
  }
  diag("growth fit: " + std::string(to_string(out.growth.kind)) + " (" + out.growth.note + ")");

  const ScalarFieldd inv_a([&a](const Vecd& x) { return 1.0 / a(x); }, "1/" + a.label());
  int n_conv = 0, n_div = 0, n_inc = 0;
  std::size_t best = 0;
  double best_value = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < cands.size(); ++k) {
    const Candidate& c = cands[k];
    const double len = c.path->end_param() - c.path->start_param();
    const std::vector<double> hz = c.finite_end ? finite_end_horizons(len) : default_horizons(len);
    if (hz.size() < 4) {
      ++n_inc;
      diag(c.name + " too short for the horizon schedule");
      continue;
    }
    ClassifierOptions co = cfg.classifier;
    if (!c.finite_end && out.growth.kind == GrowthKind::AtMostLinear)
      co.min_increment = linear_increment_floor(hz, out.growth.c1, out.growth.c2, co.window);
    const IntegralVerdict v = classify_truncations(hz, weighted_truncations(inv_a, *c.path, g, hz), co);
    switch (v.kind) {
      case IntegralKind::Converges:
        ++n_conv;
        if (v.value < best_value) {
          best_value = v.value;
          best = k;
        }
        break;
      case IntegralKind::Diverges:
        ++n_div;
        break;
      case IntegralKind::Inconclusive:
        ++n_inc;
        break;
    }
    out.tables.push_back({c.name, v});
  }

  if (n_conv > 0) {
    out.kind = VerdictKind::Incomplete;
    out.witness = *cands[best].path;
    out.witness_name = cands[best].name;
    out.length_bound = best_value;
    diag(std::to_string(n_conv) + " escaping curves have finite transformed length; witness: " + cands[best].name);
    if (!cfg.base_complete) diag("base metric not asserted complete");
    return out;
  }

  if (out.escaping_curves < cfg.min_escaping) {
    diag("insufficient escaping curves at the configured horizon (" + std::to_string(out.escaping_curves) + ")");
    return out;
  }
  if (n_inc > 0) diag(std::to_string(n_inc) + " integrals could not be classified");
  if (!cfg.base_complete) diag("base metric not asserted complete; no completeness certificate possible");
  if (base_suspect && cfg.base_complete) diag("base metric asserted complete but a curve escapes at finite g-length");

  if (n_inc == 0 && n_div == out.escaping_curves && out.growth.kind == GrowthKind::AtMostLinear &&
      cfg.base_complete && !base_suspect) {
    out.kind = VerdictKind::Complete;
    out.certificate = out.growth;
    diag("growth constants certified for the configured base point only");
    return out;
  }
  diag("all tested escaping curves diverge but no linear growth certificate: non-geodesic escaping curves remain "
       "untested");
  return out;
}

double diameter_bound(double eps, double c1, double c2) {
  if (!(eps > 0)) throw DomainError("diameter_bound: eps must be > 0 (the integral diverges otherwise)");
  if (!(c1 > 0) || !(c2 > 0)) throw DomainError("diameter_bound: c1 and c2 must be > 0");
  const double p = 1.0 + eps;
  // Split where c2 / (c1 T^p) = 0.1; beyond it expand 1/(1+q) in q.
  const double t = std::max(1.0, std::pow(10.0 * c2 / c1, 1.0 / p));
  const double head =
      integrate_adaptive([&](double s) { return 1.0 / (c1 * std::pow(s, p) + c2); }, 0.0, t, 1e-15, 1e-14, 20000).value;
  double tail = 0, sign = 1;
  for (int j = 0; j < 200; ++j) {
    const double e = p * (j + 1) - 1.0;
    const double term = std::pow(c2, j) / std::pow(c1, j + 1) * std::pow(t, -e) / e;
    tail += sign * term;
    sign = -sign;
    if (term < 1e-18 * std::abs(tail)) break;
  }
  return head + tail;
}

}  // namespace conformal
