#include "conformal/curve.hpp"

#include "conformal/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace conformal {

const char* to_string(CurveEnd e) {
  switch (e) {
    case CurveEnd::Supplied:
      return "supplied";
    case CurveEnd::Horizon:
      return "horizon";
    case CurveEnd::DomainEdge:
      return "domain-edge";
    case CurveEnd::ChartSingularity:
      return "chart-singularity";
    case CurveEnd::StepUnderflow:
      return "step-underflow";
    case CurveEnd::MaxSteps:
      return "max-steps";
  }
  return "unknown";
}

std::size_t CurvePath::segment(double t) const {
  if (params.size() < 2) return 0;
  if (t <= params.front()) return 0;
  if (t >= params.back()) return params.size() - 2;
  const auto it = std::upper_bound(params.begin(), params.end(), t);
  return static_cast<std::size_t>(it - params.begin()) - 1;
}

namespace {

void hermite(const CurvePath& c, std::size_t i, double t, Vecd* pos, Vecd* vel) {
  const double t0 = c.params[i], h = c.params[i + 1] - t0;
  const double u = (t - t0) / h;
  const Vecd& p0 = c.points[i];
  const Vecd& p1 = c.points[i + 1];
  const Vecd& m0 = c.velocities[i];
  const Vecd& m1 = c.velocities[i + 1];
  const double u2 = u * u, u3 = u2 * u;
  if (pos) {
    *pos = (2 * u3 - 3 * u2 + 1) * p0 + (u3 - 2 * u2 + u) * h * m0 + (-2 * u3 + 3 * u2) * p1 + (u3 - u2) * h * m1;
  }
  if (vel) {
    *vel = ((6 * u2 - 6 * u) * p0 + (-6 * u2 + 6 * u) * p1) / h + (3 * u2 - 4 * u + 1) * m0 + (3 * u2 - 2 * u) * m1;
  }
}

}  // namespace

Vecd CurvePath::position(double t) const {
  if (params.size() == 1) return points.front();
  Vecd p;
  const std::size_t i = segment(t);
  hermite(*this, i, std::clamp(t, params.front(), params.back()), &p, nullptr);
  return p;
}

Vecd CurvePath::velocity(double t) const {
  if (params.size() == 1) return velocities.front();
  Vecd v;
  const std::size_t i = segment(t);
  hermite(*this, i, std::clamp(t, params.front(), params.back()), nullptr, &v);
  return v;
}

void CurvePath::validate() const {
  if (params.size() < 2) throw InputError("curve needs at least two grid nodes");
  if (points.size() != params.size() || velocities.size() != params.size())
    throw InputError("curve arrays have mismatched lengths");
  for (std::size_t i = 1; i < params.size(); ++i)
    if (!(params[i] > params[i - 1])) throw InputError("curve parameters are not strictly increasing");
}

std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = a;
    return out;
  }
  for (std::size_t i = 0; i < n; ++i) out[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  out.back() = b;
  return out;
}

CurvePath make_curve(const std::function<Vecd(double)>& position, const std::function<Vecd(double)>& velocity,
                     const std::vector<double>& params, std::string label) {
  CurvePath c;
  c.params = params;
  c.metric_label = std::move(label);
  for (double t : params) {
    c.points.push_back(position(t));
    c.velocities.push_back(velocity(t));
  }
  c.validate();
  return c;
}

std::vector<double> segment_lengths(const CurvePath& curve, const MetricChartd& metric) {
  curve.validate();
  std::vector<double> out(curve.size() - 1);
  Vecd p, v;
  for (std::size_t i = 0; i + 1 < curve.size(); ++i) {
    const double a = curve.params[i], b = curve.params[i + 1];
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    double acc = 0;
    for (int q = 0; q < 3; ++q) {
      const double t = mid + half * kGauss3Nodes[q];
      hermite(curve, i, t, &p, &v);
      metric.domain().require(p, "curve_length");
      const double g = v.dot(metric.components(p) * v);
      acc += kGauss3Weights[q] * std::sqrt(std::max(g, 0.0));
    }
    out[i] = acc * half;
  }
  return out;
}

double curve_length(const CurvePath& curve, const MetricChartd& metric) {
  const auto seg = segment_lengths(curve, metric);
  double total = 0;
  for (double s : seg) total += s;
  return total;
}

CurvePath arclength_reparam(const CurvePath& curve, const MetricChartd& metric) {
  curve.validate();
  CurvePath out = curve;
  const auto seg = segment_lengths(curve, metric);
  double s = curve.params.front();
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const Vecd& x = curve.points[i];
    const Vecd& v = curve.velocities[i];
    const double speed2 = v.dot(metric.components(x) * v);
    if (!(speed2 > 0))
      throw RegularityError("curve velocity vanishes at parameter " + std::to_string(curve.params[i]));
    out.velocities[i] = v / std::sqrt(speed2);
    if (i > 0) {
      if (!(seg[i - 1] > 0))
        throw RegularityError("curve has a zero-length segment at parameter " + std::to_string(curve.params[i]));
      s += seg[i - 1];
    }
    out.params[i] = s;
  }
  out.arclength = true;
  out.metric_label = metric.label();
  return out;
}

CurvePath refine(const CurvePath& curve, int factor) {
  curve.validate();
  if (factor < 1) throw ConfigurationError("refine factor must be >= 1");
  CurvePath out = curve;
  out.params.clear();
  out.points.clear();
  out.velocities.clear();
  for (std::size_t i = 0; i + 1 < curve.size(); ++i) {
    for (int k = 0; k < factor; ++k) {
      const double t = curve.params[i] + (curve.params[i + 1] - curve.params[i]) * k / factor;
      Vecd p, v;
      if (k == 0) {
        p = curve.points[i];
        v = curve.velocities[i];
      } else {
        hermite(curve, i, t, &p, &v);
      }
      out.params.push_back(t);
      out.points.push_back(p);
      out.velocities.push_back(v);
    }
  }
  out.params.push_back(curve.params.back());
  out.points.push_back(curve.points.back());
  out.velocities.push_back(curve.velocities.back());
  return out;
}

CurvePath concatenate(const CurvePath& a, const CurvePath& b) {
  a.validate();
  b.validate();
  if (std::abs(a.params.back() - b.params.front()) > 1e-12 * std::max(1.0, std::abs(a.params.back())))
    throw InputError("concatenate: parameter ranges do not meet");
  CurvePath out = a;
  for (std::size_t i = 1; i < b.size(); ++i) {
    out.params.push_back(b.params[i]);
    out.points.push_back(b.points[i]);
    out.velocities.push_back(b.velocities[i]);
  }
  out.end = b.end;
  return out;
}

}  // namespace conformal
