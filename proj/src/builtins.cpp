#include "conformal/builtins.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace conformal {

namespace {

Domaind sphere_block(std::vector<Axisd> leading) {
  leading.push_back(Axisd::interval("theta", 0.0, M_PI, Edge::ChartSingularity, Edge::ChartSingularity));
  leading.push_back(Axisd::angle("phi"));
  return Domaind(std::move(leading));
}

}  // namespace

MetricChartd flat_metric(int dim) {
  if (dim < 1) throw ConfigurationError("flat_metric: dimension must be positive");
  return MetricChartd(
      Domaind::euclidean(dim), [dim](const Vecd&) { return Matd::Identity(dim, dim).eval(); },
      "flat" + std::to_string(dim), [](const Vecd&, Christoffeld& out) { std::fill(out.data.begin(), out.data.end(), 0.0); });
}

MetricChartd punctured_euclidean(bool analytic) {
  Domaind dom = sphere_block({Axisd::interval("r", 0.0, std::numeric_limits<double>::infinity(), Edge::Puncture,
                                              Edge::Unbounded)});
  MetricChartd::Evaluator eval = [](const Vecd& x) {
    const double r = x(0), s = std::sin(x(1));
    Matd g = Matd::Zero(3, 3);
    g(0, 0) = 1;
    g(1, 1) = r * r;
    g(2, 2) = r * r * s * s;
    return g;
  };
  MetricChartd::ChristoffelEvaluator gamma;
  if (analytic) {
    gamma = [](const Vecd& x, Christoffeld& c) {
      std::fill(c.data.begin(), c.data.end(), 0.0);
      const double r = x(0), s = std::sin(x(1)), co = std::cos(x(1));
      c(0, 1, 1) = -r;
      c(0, 2, 2) = -r * s * s;
      c(1, 0, 1) = c(1, 1, 0) = 1.0 / r;
      c(1, 2, 2) = -s * co;
      c(2, 0, 2) = c(2, 2, 0) = 1.0 / r;
      c(2, 1, 2) = c(2, 2, 1) = co / s;
    };
  }
  return MetricChartd(std::move(dom), std::move(eval), "delta", std::move(gamma));
}

MetricChartd cylinder_metric() {
  Domaind dom = sphere_block({Axisd::line("rho")});
  MetricChartd::Evaluator eval = [](const Vecd& x) {
    const double s = std::sin(x(1));
    Matd g = Matd::Identity(3, 3);
    g(2, 2) = s * s;
    return g;
  };
  MetricChartd::ChristoffelEvaluator gamma = [](const Vecd& x, Christoffeld& c) {
    std::fill(c.data.begin(), c.data.end(), 0.0);
    const double s = std::sin(x(1)), co = std::cos(x(1));
    c(1, 2, 2) = -s * co;
    c(2, 1, 2) = c(2, 2, 1) = co / s;
  };
  return MetricChartd(std::move(dom), std::move(eval), "cylinder", std::move(gamma));
}

MetricChartd cylinder_radial_metric() {
  const ScalarFieldd r([](const Vecd& x) { return x(0); }, "r",
                       [](const Vecd& x) { return Vecd::Unit(x.size(), 0).eval(); });
  return conformal_transform(punctured_euclidean(), r).relabeled("delta/r^2");
}

MetricChartd round_sphere() {
  Domaind dom({Axisd::interval("theta", 0.0, M_PI, Edge::ChartSingularity, Edge::ChartSingularity),
               Axisd::angle("phi")});
  MetricChartd::Evaluator eval = [](const Vecd& x) {
    const double s = std::sin(x(0));
    Matd g = Matd::Identity(2, 2);
    g(1, 1) = s * s;
    return g;
  };
  MetricChartd::ChristoffelEvaluator gamma = [](const Vecd& x, Christoffeld& c) {
    std::fill(c.data.begin(), c.data.end(), 0.0);
    const double s = std::sin(x(0)), co = std::cos(x(0));
    c(0, 1, 1) = -s * co;
    c(1, 0, 1) = c(1, 1, 0) = co / s;
  };
  return MetricChartd(std::move(dom), std::move(eval), "sphere2", std::move(gamma));
}

double log_coordinate_map(double r) {
  if (!(r > 0)) throw DomainError("log_coordinate_map: r must be > 0, got " + std::to_string(r));
  return std::log(r);
}

double log_coordinate_inverse(double rho) { return std::exp(rho); }

ScalarFieldd log_conformal_factor(double c1, double c2) {
  if (!(c1 > 0) || !(c2 > 0)) throw ConfigurationError("log_conformal_factor: c1 and c2 must be > 0");
  std::ostringstream label;
  label << c1 << "|rho|+" << c2;
  return ScalarFieldd([c1, c2](const Vecd& x) { return c1 * std::abs(x(0)) + c2; }, label.str(),
                      [c1](const Vecd& x) {
                        Vecd g = Vecd::Zero(x.size());
                        g(0) = x(0) > 0 ? c1 : (x(0) < 0 ? -c1 : 0.0);
                        return g;
                      });
}

BetaBundle example_beta_bundle() {
  BetaBundle b;
  b.h_base = cylinder_metric();
  b.beta = OneFormd(
      [](const Vecd& x) {
        Vecd v = Vecd::Zero(x.size());
        v(0) = x(0) / std::sqrt(x(0) * x(0) + 1.0);
        return v;
      },
      "beta");
  b.s = b.beta.outer_square();
  b.g = subtract_tensor(b.h_base, b.s);
  return b;
}

CorollaryConstants example_constants(const Vecd& x0) { return {1.0, std::sqrt(x0(0) * x0(0) + 1.0)}; }

bool example_inequality_holds(double rho, double rho0) {
  return std::abs(rho - rho0) * std::sqrt(rho0 * rho0 + 1.0) >= rho0 * (rho - rho0);
}

const std::vector<BuiltinEntry>& builtin_catalog() {
  static const std::vector<BuiltinEntry> entries = [] {
    std::vector<BuiltinEntry> e;
    for (int d = 1; d <= 3; ++d) {
      e.push_back({"flat" + std::to_string(d), d == 1 ? "x1" : (d == 2 ? "x1 x2" : "x1 x2 x3"),
                   "Euclidean metric on R^" + std::to_string(d), "complete", true, [d] { return flat_metric(d); },
                   Vecd::Zero(d)});
    }
    e.push_back({"punctured", "r theta phi",
                 "dr^2 + r^2 dOmega^2 on R^3 minus the origin; radial segments into the puncture have length 1 - eps",
                 "incomplete: the radial curve from r = 1 into the puncture has length 1", false,
                 [] { return punctured_euclidean(); }, (Vecd(3) << 1.0, M_PI / 2, 0.0).finished()});
    e.push_back({"cylinder", "rho theta phi",
                 "(dr^2/r^2 + dOmega^2) in rho = ln r: d rho^2 + dOmega^2; radial distance |rho - rho0|",
                 "complete; with factor c1|rho|+c2 still complete; with exp(|rho|) or rho^2+1 incomplete", true,
                 [] { return cylinder_metric(); }, (Vecd(3) << 0.0, M_PI / 2, 0.0).finished()});
    e.push_back({"cylinder-r", "r theta phi", "delta / r^2 in the original coordinates", "complete", true,
                 [] { return cylinder_radial_metric(); }, (Vecd(3) << 1.0, M_PI / 2, 0.0).finished()});
    e.push_back({"sphere2", "theta phi", "round unit 2-sphere", "compact, no escaping curves", true,
                 [] { return round_sphere(); }, (Vecd(2) << M_PI / 2, 0.0).finished()});
    e.push_back({"beta", "rho theta phi",
                 "cylinder minus beta(x)beta, beta = rho/sqrt(rho^2+1) d rho; d rho^2 coefficient 1/(rho^2+1)",
                 "complete via the tensor-norm criterion with c1 = 1, c2 = sqrt(rho0^2+1)", true,
                 [] { return example_beta_bundle().g; }, (Vecd(3) << 0.0, M_PI / 2, 0.0).finished()});
    return e;
  }();
  return entries;
}

const BuiltinEntry& find_builtin(const std::string& name) {
  for (const auto& e : builtin_catalog())
    if (e.name == name) return e;
  std::string known;
  for (const auto& e : builtin_catalog()) known += (known.empty() ? "" : ", ") + e.name;
  throw InputError("unknown builtin '" + name + "' (known: " + known + ")");
}

}  // namespace conformal
