#include "conformal/growth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace conformal {

const char* to_string(GrowthKind k) {
  switch (k) {
    case GrowthKind::AtMostLinear:
      return "at-most-linear";
    case GrowthKind::Superlinear:
      return "superlinear";
    case GrowthKind::Indeterminate:
      return "indeterminate";
  }
  return "unknown";
}

namespace {

struct RaySamples {
  std::vector<double> d, f;  // d[0] = 0
};

RaySamples sample_ray(const ScalarFieldd& f, const CurvePath& ray, int count) {
  RaySamples out;
  const double s0 = ray.start_param();
  const double len = ray.end_param() - s0;
  out.d.push_back(0.0);
  out.f.push_back(f(ray.points.front()));
  // log-spaced over four decades ending at the ray's end
  for (int k = 0; k < count; ++k) {
    const double d = len * std::pow(10.0, -4.0 + 4.0 * k / (count - 1));
    out.d.push_back(d);
    out.f.push_back(f(ray.position(s0 + d)));
  }
  for (double& v : out.f) {
    if (!(v > 0)) throw InvariantViolation("fit_growth: function is not positive along a ray");
    v = std::min(v, std::numeric_limits<double>::max());  // overflowed values count as huge
  }
  return out;
}

struct PerRay {
  bool linear = false;
  bool superlinear = false;
  double slope = 0, residual = 0, eps = 0;
};

// Least squares of log f against log d over d in [lo, hi].
void loglog_fit(const RaySamples& s, double lo, double hi, double& slope, double& residual) {
  double n = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 1; i < s.d.size(); ++i) {
    if (s.d[i] < lo || s.d[i] > hi) continue;
    const double x = std::log(s.d[i]), y = std::log(s.f[i]);
    n += 1;
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double den = n * sxx - sx * sx;
  slope = den > 0 ? (n * sxy - sx * sy) / den : 0.0;
  const double icept = (sy - slope * sx) / n;
  double ss = 0;
  for (std::size_t i = 1; i < s.d.size(); ++i) {
    if (s.d[i] < lo || s.d[i] > hi) continue;
    const double r = std::log(s.f[i]) - (icept + slope * std::log(s.d[i]));
    ss += r * r;
  }
  residual = std::sqrt(ss / n);
}

double max_ratio(const RaySamples& s, double lo, double hi, double c2, double power) {
  double m = 0;
  for (std::size_t i = 1; i < s.d.size(); ++i)
    if (s.d[i] >= lo && s.d[i] <= hi) m = std::max(m, (s.f[i] - c2) / std::pow(s.d[i], power));
  return m;
}

double min_ratio(const RaySamples& s, double lo, double hi, double c2, double power) {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < s.d.size(); ++i)
    if (s.d[i] >= lo && s.d[i] <= hi) m = std::min(m, (s.f[i] - c2) / std::pow(s.d[i], power));
  return m;
}

}  // namespace

GrowthClass fit_growth(const ScalarFieldd& f, const MetricChartd& metric, const Vecd& x0,
                       const std::vector<CurvePath>& rays, const GrowthOptions& opt) {
  std::vector<const CurvePath*> ptrs;
  for (const auto& r : rays) ptrs.push_back(&r);
  return fit_growth(f, metric, x0, ptrs, opt);
}

GrowthClass fit_growth(const ScalarFieldd& f, const MetricChartd& metric, const Vecd& x0,
                       const std::vector<const CurvePath*>& rays, const GrowthOptions& opt) {
  if (rays.size() < 2) throw InsufficientDataError("fit_growth: at least 2 rays are required");
  std::vector<RaySamples> samples;
  for (const CurvePath* rp : rays) {
    const CurvePath& ray = *rp;
    ray.validate();
    if ((ray.points.front() - x0).norm() > 1e-9 * std::max(1.0, x0.norm()))
      throw ConfigurationError("fit_growth: ray does not start at x0");
    const CurvePath& r = ray.arclength ? ray : arclength_reparam(ray, metric);
    if (r.end_param() - r.start_param() < opt.min_horizon)
      throw InsufficientDataError("fit_growth: ray shorter than the minimum horizon " + std::to_string(opt.min_horizon));
    samples.push_back(sample_ray(f, r, std::max(opt.samples_per_ray, 16)));
  }

  GrowthClass out;
  const double f0 = samples.front().f.front();
  std::vector<PerRay> per(samples.size());
  int n_lin = 0, n_sup = 0;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const RaySamples& s = samples[k];
    const double end = s.d.back();
    PerRay& p = per[k];
    loglog_fit(s, end / 10, end, p.slope, p.residual);
    out.slopes.push_back(p.slope);
    out.fit_residual = std::max(out.fit_residual, p.residual);

    const double late = max_ratio(s, end / 2, end, f0, 1.0);
    const double early = max_ratio(s, end / 20, end / 2, f0, 1.0);
    p.linear = p.slope <= opt.linear_slope_max && late <= opt.envelope_growth * early + 1e-12 * std::max(1.0, f0);

    p.eps = p.slope - 1.0 - opt.eps_margin;
    if (!p.linear && p.eps >= opt.eps_min && p.residual <= opt.residual_max) {
      const double c2 = 0.5 * *std::min_element(s.f.begin(), s.f.end());
      const double lo_late = min_ratio(s, end / 2, end, c2, 1.0 + p.eps);
      const double lo_early = min_ratio(s, end / 20, end / 2, c2, 1.0 + p.eps);
      p.superlinear = lo_late > 0 && lo_late >= (1.0 - opt.eps_margin) * lo_early;
    }
    n_lin += p.linear;
    n_sup += p.superlinear;
  }

  std::ostringstream note;
  const int total = static_cast<int>(samples.size());
  if (n_lin == total) {
    out.kind = GrowthKind::AtMostLinear;
    out.c2 = f0;
    double c1 = 0;
    for (const auto& s : samples) c1 = std::max(c1, max_ratio(s, 0.0, s.d.back(), f0, 1.0));
    out.c1 = std::max(c1, 1e-12);
    note << "linear envelope certified on " << total << " rays";
  } else if (n_sup == total) {
    double eps = std::numeric_limits<double>::infinity(), fmin = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < samples.size(); ++k) {
      eps = std::min(eps, per[k].eps);
      fmin = std::min(fmin, *std::min_element(samples[k].f.begin(), samples[k].f.end()));
    }
    const double c2 = 0.5 * fmin;
    double c1 = std::numeric_limits<double>::infinity();
    for (const auto& s : samples) c1 = std::min(c1, min_ratio(s, 0.0, s.d.back(), c2, 1.0 + eps));
    if (c1 > 0) {
      out.kind = GrowthKind::Superlinear;
      out.c1 = c1;
      out.c2 = c2;
      out.eps = eps;
      note << "superlinear lower envelope certified on " << total << " rays";
    } else {
      note << "superlinear slopes but no positive lower envelope";
    }
  } else {
    note << n_lin << " of " << total << " rays linear, " << n_sup << " superlinear, "
         << (total - n_lin - n_sup) << " neither";
  }
  out.note = note.str();
  return out;
}

}  // namespace conformal
