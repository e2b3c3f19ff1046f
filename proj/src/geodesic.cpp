#include "conformal/geodesic.hpp"

#include "conformal/ode.hpp"
#include "conformal/parallel.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <random>

namespace conformal {

namespace {

constexpr double kEdgeProbe = 1e-3;

bool near_chart_singularity(const Domaind& dom, const Vecd& x) {
  for (int i = 0; i < dom.dim(); ++i) {
    const auto& a = dom.axes[i];
    if (a.periodic) continue;
    if (a.lo_edge == Edge::ChartSingularity && x(i) - a.lo < 2 * dom.singular_margin) return true;
    if (a.hi_edge == Edge::ChartSingularity && a.hi - x(i) < 2 * dom.singular_margin) return true;
  }
  return false;
}

}  // namespace

namespace {

CurvePath integrate_impl(const MetricChartd& metric, const Vecd& x0, const Vecd& v0, double horizon,
                         const GeodesicOptions& opt, double* drift) {
  const Domaind& dom = metric.domain();
  dom.require(x0, "integrate_geodesic");
  const int n = metric.dim();
  if (v0.size() != n) throw ConfigurationError("integrate_geodesic: velocity has wrong dimension");
  if (!(v0.norm() > 0)) throw ConfigurationError("integrate_geodesic: initial velocity is zero");
  if (!(horizon > 0)) throw ConfigurationError("integrate_geodesic: horizon must be positive");
  const double speed = std::sqrt(v0.dot(metric.components(x0) * v0));
  if (!(speed > 0)) throw RegularityError("integrate_geodesic: initial velocity has zero metric length");

  Christoffeld gamma(n), probe(n);
  Vecd xb(n), xa(n);
  OdeRhs rhs = [&](double, const Vecd& y, Vecd& dy) {
    xb = y.head(n);
    christoffel_into(metric, xb, opt.fd_step, gamma);
    const double* v = y.data() + n;
    const double* G = gamma.data.data();
    for (int k = 0; k < n; ++k) {
      dy(k) = v[k];
      double acc = 0;
      for (int i = 0; i < n; ++i, G += n) {
        double row = 0;
        for (int j = 0; j < n; ++j) row += G[j] * v[j];
        acc += row * v[i];
      }
      dy(n + k) = -acc;
    }
  };
  bool has_edges = !dom.excluded.empty();
  for (const auto& a : dom.axes)
    if (!a.periodic && (a.lo_edge == Edge::Puncture || a.hi_edge == Edge::Puncture || a.lo_edge == Edge::Boundary ||
                        a.hi_edge == Edge::Boundary))
      has_edges = true;
  OdeAdmissible admissible = [&](const Vecd& y) {
    xa = y.head(n);
    if (!dom.contains(xa)) return false;
    if (!has_edges) return true;
    const double edge = std::min(dom.puncture_distance(xa), dom.boundary_distance(xa));
    if (edge <= opt.stop_margin) return false;
    if (edge < kEdgeProbe) {
      // metrics that degenerate toward an edge end the curve there
      try {
        christoffel_into(metric, xa, opt.fd_step, probe);
      } catch (const ConditioningError&) {
        return false;
      }
    }
    return true;
  };

  OdeOptions o;
  o.atol = opt.atol;
  o.rtol = opt.rtol;
  o.max_step_floor = opt.max_step_floor / speed;
  o.max_step_relative = opt.max_step_relative;
  o.max_steps = opt.max_steps;

  Vecd y0(2 * n);
  y0 << x0, v0;
  CurvePath path;
  path.metric_label = metric.label();
  const double e0 = speed * speed;
  double worst = 0;
  OdeObserver observe = [&](double, const Vecd& y) {
    path.points.emplace_back(y.head(n));
    path.velocities.emplace_back(y.tail(n));
    if (drift) {
      const Vecd& v = path.velocities.back();
      worst = std::max(worst, std::abs(v.dot(metric.components(path.points.back()) * v) - e0));
    }
  };
  OdeSolution sol = integrate_dopri45(rhs, 0.0, y0, horizon, o, admissible, observe);
  path.params = std::move(sol.t);
  if (drift) *drift = worst;
  switch (sol.status) {
    case OdeStatus::ReachedEnd:
      path.end = CurveEnd::Horizon;
      break;
    case OdeStatus::LeftAdmissibleRegion:
      path.end = near_chart_singularity(dom, path.points.back()) ? CurveEnd::ChartSingularity : CurveEnd::DomainEdge;
      path.diagnostic = std::string("stopped at the ") +
                        (path.end == CurveEnd::ChartSingularity ? "chart-singularity margin" : "domain edge") +
                        " at parameter " + std::to_string(path.params.back());
      break;
    case OdeStatus::StepUnderflow:
    case OdeStatus::NonFinite:
      path.end = CurveEnd::StepUnderflow;
      path.diagnostic = "step-size underflow near a metric degeneracy at " + format_point(path.points.back());
      break;
    case OdeStatus::MaxStepsExceeded:
      path.end = CurveEnd::MaxSteps;
      path.diagnostic = "step budget exhausted";
      break;
  }
  return path;
}

}  // namespace

CurvePath integrate_geodesic(const MetricChartd& metric, const Vecd& x0, const Vecd& v0, double horizon,
                             const GeodesicOptions& opt) {
  return integrate_impl(metric, x0, v0, horizon, opt, nullptr);
}

CurvePath integrate_geodesic(const MetricChartd& metric, const Vecd& x0, const Vecd& v0, double horizon,
                             double tol) {
  GeodesicOptions opt;
  opt.atol = opt.rtol = tol;
  return integrate_geodesic(metric, x0, v0, horizon, opt);
}

double speed_drift(const CurvePath& curve, const MetricChartd& metric) {
  const double s0 = curve.velocities.front().dot(metric.components(curve.points.front()) * curve.velocities.front());
  double worst = 0;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const Vecd& v = curve.velocities[i];
    worst = std::max(worst, std::abs(v.dot(metric.components(curve.points[i]) * v) - s0));
  }
  return worst;
}

std::vector<Vecd> sample_unit_directions(const MetricChartd& metric, const Vecd& x0, int count, std::uint64_t seed) {
  if (count < 1) throw ConfigurationError("direction count must be >= 1");
  const int n = metric.dim();
  const Matd g = metric.at(x0);
  Eigen::LLT<Matd> llt(g);
  if (llt.info() != Eigen::Success) require_positive_definite<double>(g, x0, metric.label());
  std::mt19937_64 rng(seed);
  // 53-bit uniform in (0, 1]; Box-Muller normals. Independent of the
  // standard library's distribution implementations.
  auto uniform = [&rng] { return (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53; };
  std::vector<Vecd> out;
  out.reserve(static_cast<std::size_t>(count));
  while (static_cast<int>(out.size()) < count) {
    Vecd u(n);
    for (int i = 0; i < n; i += 2) {
      const double r = std::sqrt(-2.0 * std::log(uniform()));
      const double phi = 2.0 * M_PI * uniform();
      u(i) = r * std::cos(phi);
      if (i + 1 < n) u(i + 1) = r * std::sin(phi);
    }
    const double norm = u.norm();
    if (!(norm > 1e-12)) continue;
    u /= norm;
    out.push_back(llt.matrixU().solve(u));  // v = L^-T u has v^T G v = |u|^2 = 1
  }
  return out;
}

std::vector<SprayRay> spray_rays(const MetricChartd& metric, const Vecd& x0, int count, double horizon,
                                 std::uint64_t seed, const SprayOptions& options) {
  if (count < 1) throw ConfigurationError("spray_rays: count must be >= 1");
  std::vector<Vecd> dirs;
  if (options.include_axis_rays) {
    const Matd g = metric.at(x0);
    for (int i = 0; i < metric.dim(); ++i)
      for (double sign : {1.0, -1.0}) {
        Vecd e = Vecd::Zero(metric.dim());
        e(i) = sign / std::sqrt(g(i, i));
        dirs.push_back(e);
      }
  }
  for (auto& d : sample_unit_directions(metric, x0, count, seed)) dirs.push_back(std::move(d));

  const Exhaustion ex = options.exhaustion.at(x0);
  std::vector<SprayRay> rays(dirs.size());
  parallel_for(dirs.size(), options.threads, [&](std::size_t i) {
    SprayRay r;
    r.direction = dirs[i];
    double drift = 0;
    r.path = integrate_impl(metric, x0, dirs[i], horizon, options.geodesic, &drift);
    if (r.path.size() >= 2) {
      if (drift <= 1e-6) {
        r.path.arclength = true;  // unit initial speed: the affine parameter is arc length
      } else {
        r.path = arclength_reparam(r.path, metric);
      }
      r.escape = escape_monitor(r.path, ex, metric.domain());
    }
    rays[i] = std::move(r);
  });
  return rays;
}

// ---------------------------------------------------------------------------
// Distance estimation

namespace {

// Length of the polyline through `nodes`; each piece is a straight coordinate
// segment refined into `sub` quadrature cells. Returns +inf if a node leaves the domain.
double polyline_length(const MetricChartd& metric, const std::vector<Vecd>& nodes, int sub) {
  double total = 0;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    const Vecd a = nodes[i], d = nodes[i + 1] - nodes[i];
    if (d.norm() == 0) continue;
    std::vector<double> grid = linspace(0.0, 1.0, static_cast<std::size_t>(sub) + 1);
    for (double t : grid)
      if (!metric.domain().contains(Vecd(a + t * d))) return std::numeric_limits<double>::infinity();
    const CurvePath seg = make_curve([&](double t) { return Vecd(a + t * d); }, [&](double) { return d; }, grid);
    total += curve_length(seg, metric);
  }
  return total;
}

// Cheap midpoint-rule length used inside the relaxation loop.
double polyline_energy(const MetricChartd& metric, const std::vector<Vecd>& nodes) {
  double total = 0;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    const Vecd d = nodes[i + 1] - nodes[i];
    const Vecd mid = 0.5 * (nodes[i + 1] + nodes[i]);
    if (!metric.domain().contains(mid)) return std::numeric_limits<double>::infinity();
    total += std::sqrt(std::max(0.0, d.dot(metric.components(mid) * d)));
  }
  return total;
}

struct ShotResult {
  bool ok = false;
  double length = std::numeric_limits<double>::infinity();
  double residual = std::numeric_limits<double>::infinity();
};

ShotResult shoot(const MetricChartd& metric, const Vecd& x, const Vecd& y, const DistanceBudget& budget) {
  GeodesicOptions go;
  go.atol = go.rtol = 1e-12;
  go.max_step_floor = std::numeric_limits<double>::infinity();
  go.max_step_relative = std::numeric_limits<double>::infinity();
  go.max_steps = 200000;
  const int n = metric.dim();
  auto endpoint = [&](const Vecd& v, CurvePath* keep) -> std::optional<Vecd> {
    try {
      CurvePath p = integrate_geodesic(metric, x, v, 1.0, go);
      if (p.end != CurveEnd::Horizon) return std::nullopt;
      Vecd e = p.points.back();
      if (keep) *keep = std::move(p);
      return e;
    } catch (const Error&) {
      return std::nullopt;
    }
  };
  Vecd v = y - x;
  ShotResult res;
  CurvePath path;
  auto f = endpoint(v, &path);
  if (!f) return res;
  Vecd r = *f - y;
  const double target = budget.tolerance * (1.0 + y.norm());
  for (int it = 0; it < budget.shooting_iterations && r.norm() > target; ++it) {
    Matd jac(n, n);
    const double h = 1e-7 * std::max(1.0, v.norm());
    for (int j = 0; j < n; ++j) {
      Vecd vp = v;
      vp(j) += h;
      auto fp = endpoint(vp, nullptr);
      if (!fp) return res;
      jac.col(j) = (*fp - *f) / h;
    }
    const Vecd dv = jac.partialPivLu().solve(-r);
    double step = 1.0;
    bool improved = false;
    for (int bt = 0; bt < 12; ++bt, step *= 0.5) {
      CurvePath cand;
      auto fc = endpoint(v + step * dv, &cand);
      if (fc && (*fc - y).norm() < r.norm()) {
        v += step * dv;
        f = fc;
        r = *fc - y;
        path = std::move(cand);
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }
  res.residual = r.norm();
  if (res.residual > 1e3 * target) return res;
  res.ok = true;
  // Close the residual gap with a straight piece so the value stays an upper bound.
  const double closing = res.residual == 0 ? 0.0 : polyline_length(metric, {path.points.back(), y}, 4);
  res.length = curve_length(path, metric) + closing;
  return res;
}

}  // namespace

DistanceEstimate distance_estimate(const MetricChartd& metric, const Vecd& x, const Vecd& y,
                                   const DistanceBudget& budget) {
  const Domaind& dom = metric.domain();
  dom.require(x, "distance_estimate");
  dom.require(y, "distance_estimate");
  DistanceEstimate best;
  if ((x - y).norm() == 0) {
    best.method = "coincident";
    return best;
  }
  best.upper_bound = polyline_length(metric, {x, y}, budget.segment_nodes - 1);
  best.method = "segment";
  best.gap = std::numeric_limits<double>::infinity();

  const ShotResult shot = shoot(metric, x, y, budget);
  if (shot.ok) {
    if (shot.length <= best.upper_bound) {
      best.upper_bound = shot.length;
      best.method = "shooting";
    }
    best.gap = shot.residual;
    best.gap_large = false;
    return best;
  }

  // Relaxation of a polyline by gradient descent on the midpoint-rule length.
  const int m = std::max(2, budget.relaxation_nodes);
  std::vector<Vecd> nodes;
  for (int i = 0; i <= m; ++i) nodes.push_back(x + (y - x) * (static_cast<double>(i) / m));
  const int n = metric.dim();
  double energy = polyline_energy(metric, nodes);
  double grad_norm = std::numeric_limits<double>::infinity();
  int it = 0;
  for (; it < budget.relaxation_iterations && std::isfinite(energy); ++it) {
    std::vector<Vecd> grad(nodes.size(), Vecd::Zero(n));
    grad_norm = 0;
    for (int i = 1; i < m; ++i)
      for (int k = 0; k < n; ++k) {
        const double h = 1e-7 * std::max(1.0, std::abs(nodes[i](k)));
        const double keep = nodes[i](k);
        nodes[i](k) = keep + h;
        const double ep = polyline_energy(metric, nodes);
        nodes[i](k) = keep - h;
        const double em = polyline_energy(metric, nodes);
        nodes[i](k) = keep;
        grad[i](k) = (std::isfinite(ep) && std::isfinite(em)) ? (ep - em) / (2 * h) : 0.0;
        grad_norm += grad[i](k) * grad[i](k);
      }
    grad_norm = std::sqrt(grad_norm);
    if (grad_norm < budget.tolerance) break;
    double step = 1.0 / m;
    bool moved = false;
    for (int bt = 0; bt < 30; ++bt, step *= 0.5) {
      std::vector<Vecd> trial = nodes;
      for (int i = 1; i < m; ++i) trial[i] -= step * grad[i];
      const double et = polyline_energy(metric, trial);
      if (et < energy - 1e-4 * step * grad_norm * grad_norm) {
        nodes = std::move(trial);
        energy = et;
        moved = true;
        break;
      }
    }
    if (!moved) break;
  }
  const double relaxed = polyline_length(metric, nodes, 8);
  if (relaxed < best.upper_bound) {
    best.upper_bound = relaxed;
    best.method = "relaxation";
  }
  best.gap = grad_norm;
  best.gap_large = !(grad_norm < 1e-6);
  return best;
}

}  // namespace conformal
