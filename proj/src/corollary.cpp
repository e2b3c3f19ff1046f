#include "conformal/corollary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace conformal {

double NormField::sample(const Vecd& x) {
  const double v = (*this)(x);
  samples_.push_back(x);
  if (v > sup_ || sup_point_.size() == 0) {
    sup_ = std::max(sup_, v);
    sup_point_ = x;
  }
  return v;
}

namespace {

double norm_squared_unchecked(const SymTensorFieldd& s, const MetricChartd& h, const Vecd& x) {
  return std::max(0.0, pencil_max_eigenvalue<double>(s(x), h.components(x)));
}

[[noreturn]] void throw_degenerate(const Vecd& x, double n2) {
  throw DegeneracyError("tensor norm reaches 1 at " + format_point(x) + " (norm^2 = " + std::to_string(n2) + ")", x,
                        1.0 - n2);
}

}  // namespace

MetricChartd derived_conformal_metric(const MetricChartd& h, const SymTensorFieldd& s) {
  MetricChartd::Evaluator eval = [h, s](const Vecd& x) -> Matd {
    const double n2 = norm_squared_unchecked(s, h, x);
    if (!(n2 < 1.0)) throw_degenerate(x, n2);
    return h.components(x) * (1.0 - n2);
  };
  return MetricChartd(h.domain(), std::move(eval), h.label() + "(1-|||" + s.label() + "|||^2)");
}

ScalarFieldd corollary_factor(const MetricChartd& h, const SymTensorFieldd& s) {
  return ScalarFieldd(
      [h, s](const Vecd& x) {
        const double n2 = norm_squared_unchecked(s, h, x);
        if (!(n2 < 1.0)) throw_degenerate(x, n2);
        return 1.0 / std::sqrt(1.0 - n2);
      },
      "1/sqrt(1-|||" + s.label() + "|||^2)");
}

const char* to_string(CorollaryMode m) { return m == CorollaryMode::Integral ? "integral" : "inequality"; }

CorollaryReport corollary_check(const MetricChartd& h, const SymTensorFieldd& s, const Vecd& x0,
                                const std::vector<CurvePath>& rays, CorollaryMode mode, const ConstantsFn& constants,
                                const CorollaryOptions& opt) {
  h.domain().require(x0, "corollary_check");
  if (!s.declared_nonnegative())
    throw InvariantViolation("corollary_check: tensor " + s.label() + " is not declared non-negative");
  CorollaryReport rep;
  rep.mode = mode;
  rep.witness_point = x0;
  NormField norm(s, h);

  if (mode == CorollaryMode::Integral) {
    // Hypothesis spot check along the supplied rays before the verdict.
    for (const auto& r : rays)
      for (const auto& p : r.points)
        if (norm.sample(p) >= 1.0) throw_degenerate(p, norm.sup_estimate() * norm.sup_estimate());
    VerdictConfig cfg = opt.verdict;
    for (const auto& r : rays) cfg.extra_curves.push_back(r);
    rep.verdict = completeness_verdict(h, corollary_factor(h, s), x0, cfg);
    rep.pass = rep.verdict->kind == VerdictKind::Complete;
    rep.sup_norm_estimate = norm.sup_estimate();
    rep.points_checked = static_cast<int>(norm.samples().size());
    if (rep.verdict->witness) rep.witness_point = rep.verdict->witness->points.back();
    rep.note = std::string("verdict on h with factor 1/sqrt(1-|||s|||^2): ") + to_string(rep.verdict->kind);
    return rep;
  }

  if (!constants) throw ConfigurationError("corollary_check: inequality mode needs constants (c1, c2)");
  const CorollaryConstants c = constants(x0);
  if (!(c.c1 > 0) || !(c.c2 > 0)) throw ConfigurationError("corollary_check: constants must be positive");
  double worst = std::numeric_limits<double>::infinity();
  bool estimated = false;
  auto check_point = [&](const Vecd& x) {
    const double n = norm.sample(x);
    if (n >= 1.0) throw_degenerate(x, n * n);
    double d;
    if (opt.distance) {
      d = opt.distance(x, x0);
    } else {
      d = distance_estimate(h, x, x0).upper_bound;
      estimated = true;
    }
    const double q = c.c1 * d + c.c2;
    const double margin = (1.0 - 1.0 / (q * q)) - n * n;
    if (margin < worst) {
      worst = margin;
      rep.witness_point = x;
    }
  };
  check_point(x0);
  for (const auto& r : rays) {
    const std::size_t n = r.size();
    const std::size_t want = static_cast<std::size_t>(std::max(2, opt.samples_per_ray));
    const std::size_t stride = std::max<std::size_t>(1, n / want);
    for (std::size_t i = 0; i < n; i += stride) check_point(r.points[i]);
    check_point(r.points.back());
  }
  rep.worst_margin = worst;
  rep.pass = worst >= -opt.tol;
  rep.sup_norm_estimate = norm.sup_estimate();
  rep.points_checked = static_cast<int>(norm.samples().size());
  std::ostringstream note;
  note << "c1 = " << c.c1 << ", c2 = " << c.c2 << " at the given base point";
  if (estimated) note << "; d_h replaced by its estimated upper bound";
  rep.note = note.str();
  return rep;
}

}  // namespace conformal
