#pragma once

// Coordinate charts carrying a Riemannian metric, positive scalar fields,
// symmetric (0,2)-tensor fields and one-forms, together with the algebra that
// derives new metrics from old ones (conformal rescaling, tensor subtraction,
// pullback).  Everything is templated on the scalar type; the analysis
// modules instantiate with double.

#include "conformal/core.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace conformal {

/// What lies beyond a finite side of a coordinate interval.
enum class Edge {
  Unbounded,         ///< the side is at +-infinity
  Boundary,          ///< the manifold ends here; approaching it is escape
  Puncture,          ///< a removed set (e.g. r = 0); approaching it is escape
  ChartSingularity,  ///< coordinate artifact (e.g. theta = 0); kept at a margin
};

template <typename Scalar>
struct Axis {
  std::string name;
  Scalar lo = -std::numeric_limits<Scalar>::infinity();
  Scalar hi = std::numeric_limits<Scalar>::infinity();
  Edge lo_edge = Edge::Unbounded;
  Edge hi_edge = Edge::Unbounded;
  /// Periodic coordinates (angles) are never bounds-checked and never count
  /// towards the radius of an exhaustion ball.
  bool periodic = false;

  static Axis line(std::string name) { return Axis{std::move(name)}; }

  static Axis interval(std::string name, Scalar lo, Scalar hi, Edge lo_edge, Edge hi_edge) {
    return Axis{std::move(name), lo, hi, lo_edge, hi_edge, false};
  }

  static Axis angle(std::string name) {
    Axis a{std::move(name)};
    a.periodic = true;
    return a;
  }
};

/// A lower-dimensional set removed from the chart: a single point or a
/// coordinate hyperplane x[axis] = value.
template <typename Scalar>
struct ExcludedSet {
  enum class Kind { Point, Hyperplane };

  Kind kind = Kind::Point;
  Vec<Scalar> point;
  int axis = 0;
  Scalar value = 0;

  static ExcludedSet at_point(Vec<Scalar> p) { return ExcludedSet{Kind::Point, std::move(p), 0, 0}; }
  static ExcludedSet hyperplane(int axis, Scalar value) {
    return ExcludedSet{Kind::Hyperplane, Vec<Scalar>(), axis, value};
  }

  Scalar distance(const Vec<Scalar>& x) const {
    using std::abs;
    if (kind == Kind::Hyperplane) return abs(x(axis) - value);
    return (x - point).norm();
  }
};

template <typename Scalar>
class Domain {
 public:
  using Point = Vec<Scalar>;

  std::vector<Axis<Scalar>> axes;
  std::vector<ExcludedSet<Scalar>> excluded;
  Scalar singular_margin = Scalar(1e-3);

  Domain() = default;
  explicit Domain(std::vector<Axis<Scalar>> axes_, std::vector<ExcludedSet<Scalar>> excluded_ = {})
      : axes(std::move(axes_)), excluded(std::move(excluded_)) {}

  /// All axes unbounded: R^n.
  static Domain euclidean(int dim) {
    std::vector<Axis<Scalar>> a;
    for (int i = 0; i < dim; ++i) a.push_back(Axis<Scalar>::line("x" + std::to_string(i + 1)));
    return Domain(std::move(a));
  }

  int dim() const { return static_cast<int>(axes.size()); }

  bool contains(const Point& x) const {
    if (x.size() != dim()) return false;
    for (int i = 0; i < dim(); ++i) {
      if (!std::isfinite(static_cast<double>(x(i)))) return false;
      const auto& a = axes[i];
      if (a.periodic) continue;
      if (!(x(i) > a.lo && x(i) < a.hi)) return false;
      if (a.lo_edge == Edge::ChartSingularity && x(i) - a.lo < singular_margin) return false;
      if (a.hi_edge == Edge::ChartSingularity && a.hi - x(i) < singular_margin) return false;
    }
    for (const auto& e : excluded)
      if (!(e.distance(x) > Scalar(0))) return false;
    return true;
  }

  void require(const Point& x, const char* context) const {
    if (!contains(x))
      throw DomainError(std::string(context) + ": point " + format_point(x) +
                        " is outside the chart domain or on an excluded set");
  }

  /// Distance to the nearest removed set (puncture edges and excluded sets).
  Scalar puncture_distance(const Point& x) const {
    Scalar d = std::numeric_limits<Scalar>::infinity();
    for (int i = 0; i < dim(); ++i) {
      const auto& a = axes[i];
      if (a.periodic) continue;
      if (a.lo_edge == Edge::Puncture) d = std::min(d, x(i) - a.lo);
      if (a.hi_edge == Edge::Puncture) d = std::min(d, a.hi - x(i));
    }
    for (const auto& e : excluded) d = std::min(d, e.distance(x));
    return d;
  }

  /// Distance to the nearest finite side where the manifold ends.
  Scalar boundary_distance(const Point& x) const {
    Scalar d = std::numeric_limits<Scalar>::infinity();
    for (int i = 0; i < dim(); ++i) {
      const auto& a = axes[i];
      if (a.periodic) continue;
      if (a.lo_edge == Edge::Boundary) d = std::min(d, x(i) - a.lo);
      if (a.hi_edge == Edge::Boundary) d = std::min(d, a.hi - x(i));
    }
    return d;
  }

  /// Coordinate distance from center over the non-periodic axes.
  Scalar radius(const Point& x, const Point& center) const {
    Scalar r2 = 0;
    for (int i = 0; i < dim(); ++i) {
      if (axes[i].periodic) continue;
      const Scalar d = x(i) - center(i);
      r2 += d * d;
    }
    using std::sqrt;
    return sqrt(r2);
  }
};

/// Christoffel symbols of the second kind, Gamma^k_ij stored as [k][i][j].
template <typename Scalar>
struct Christoffel {
  int dim = 0;
  std::vector<Scalar> data;

  Christoffel() = default;
  explicit Christoffel(int n) : dim(n), data(static_cast<std::size_t>(n * n * n), Scalar(0)) {}

  void resize(int n) {
    dim = n;
    data.assign(static_cast<std::size_t>(n * n * n), Scalar(0));
  }
  Scalar& operator()(int k, int i, int j) { return data[static_cast<std::size_t>((k * dim + i) * dim + j)]; }
  Scalar operator()(int k, int i, int j) const {
    return data[static_cast<std::size_t>((k * dim + i) * dim + j)];
  }
};

template <typename Scalar>
class MetricChart {
 public:
  using Point = Vec<Scalar>;
  using Matrix = Mat<Scalar>;
  using Evaluator = std::function<Matrix(const Point&)>;
  using ChristoffelEvaluator = std::function<void(const Point&, Christoffel<Scalar>&)>;

  MetricChart() = default;
  MetricChart(Domain<Scalar> domain, Evaluator components, std::string label,
              ChristoffelEvaluator christoffel = {})
      : domain_(std::move(domain)),
        components_(std::move(components)),
        christoffel_(std::move(christoffel)),
        label_(std::move(label)) {}

  int dim() const { return domain_.dim(); }
  const Domain<Scalar>& domain() const { return domain_; }
  const std::string& label() const { return label_; }

  /// Raw component matrix, no checks. Hot paths use this.
  Matrix components(const Point& x) const { return components_(x); }

  /// Component matrix with domain and exact-symmetry checks.
  Matrix at(const Point& x) const {
    domain_.require(x, label_.c_str());
    Matrix g = components_(x);
    if (g.rows() != dim() || g.cols() != dim())
      throw InvariantViolation(label_ + ": metric evaluator returned a matrix of the wrong size");
    if (!(g.array() == g.transpose().array()).all())
      throw InvariantViolation(label_ + ": metric is not symmetric at " + format_point(x));
    return g;
  }

  bool has_analytic_christoffel() const { return static_cast<bool>(christoffel_); }
  const ChristoffelEvaluator& analytic_christoffel() const { return christoffel_; }

  MetricChart with_domain(Domain<Scalar> d) const {
    MetricChart c = *this;
    c.domain_ = std::move(d);
    return c;
  }
  MetricChart relabeled(std::string label) const {
    MetricChart c = *this;
    c.label_ = std::move(label);
    return c;
  }

 private:
  Domain<Scalar> domain_;
  Evaluator components_;
  ChristoffelEvaluator christoffel_;
  std::string label_;
};

template <typename Scalar>
class ScalarField {
 public:
  using Point = Vec<Scalar>;
  using Evaluator = std::function<Scalar(const Point&)>;
  using GradientEvaluator = std::function<Point(const Point&)>;

  ScalarField() = default;
  ScalarField(Evaluator value, std::string label, GradientEvaluator gradient = {})
      : value_(std::move(value)), gradient_(std::move(gradient)), label_(std::move(label)) {}

  static ScalarField constant(Scalar c) {
    std::ostringstream os;
    os << c;
    return ScalarField([c](const Point&) { return c; }, os.str(),
                       [](const Point& x) { return Point::Zero(x.size()).eval(); });
  }

  Scalar operator()(const Point& x) const { return value_(x); }
  bool has_gradient() const { return static_cast<bool>(gradient_); }
  Point gradient(const Point& x) const { return gradient_(x); }
  const std::string& label() const { return label_; }

 private:
  Evaluator value_;
  GradientEvaluator gradient_;
  std::string label_;
};

template <typename Scalar>
class SymTensorField {
 public:
  using Point = Vec<Scalar>;
  using Matrix = Mat<Scalar>;
  using Evaluator = std::function<Matrix(const Point&)>;

  SymTensorField() = default;
  SymTensorField(Evaluator components, std::string label, bool nonnegative = true)
      : components_(std::move(components)), label_(std::move(label)), nonnegative_(nonnegative) {}

  static SymTensorField zero(int dim) {
    return SymTensorField([dim](const Point&) { return Matrix::Zero(dim, dim).eval(); }, "0", true);
  }

  Matrix operator()(const Point& x) const { return components_(x); }
  bool declared_nonnegative() const { return nonnegative_; }
  const std::string& label() const { return label_; }

 private:
  Evaluator components_;
  std::string label_;
  bool nonnegative_ = true;
};

template <typename Scalar>
class OneForm {
 public:
  using Point = Vec<Scalar>;
  using Evaluator = std::function<Point(const Point&)>;

  OneForm() = default;
  OneForm(Evaluator components, std::string label)
      : components_(std::move(components)), label_(std::move(label)) {}

  Point operator()(const Point& x) const { return components_(x); }
  const std::string& label() const { return label_; }

  /// beta (x) beta as a non-negative symmetric tensor field.
  SymTensorField<Scalar> outer_square() const {
    auto c = components_;
    return SymTensorField<Scalar>(
        [c](const Point& x) {
          const Point b = c(x);
          return (b * b.transpose()).eval();
        },
        label_ + "⊗" + label_, true);
  }

 private:
  Evaluator components_;
  std::string label_;
};

template <typename Scalar>
struct TangentVector {
  Vec<Scalar> base;
  Vec<Scalar> components;
};

using Domaind = Domain<double>;
using Axisd = Axis<double>;
using ExcludedSetd = ExcludedSet<double>;
using MetricChartd = MetricChart<double>;
using ScalarFieldd = ScalarField<double>;
using SymTensorFieldd = SymTensorField<double>;
using OneFormd = OneForm<double>;
using Christoffeld = Christoffel<double>;

// ---------------------------------------------------------------------------
// Metric algebra

/// g_x(v, w) = v^T G(x) w.
template <typename Scalar>
Scalar metric_eval(const MetricChart<Scalar>& chart, const Vec<Scalar>& x, const Vec<Scalar>& v,
                   const Vec<Scalar>& w) {
  if (v.size() != chart.dim() || w.size() != chart.dim())
    throw ConfigurationError("metric_eval: vector dimension does not match chart");
  return v.dot(chart.at(x) * w);
}

/// Throws DegeneracyError unless G is positive definite. x is the witness.
template <typename Scalar>
void require_positive_definite(const Mat<Scalar>& g, const Vec<Scalar>& x, const std::string& what) {
  Eigen::LLT<Mat<Scalar>> llt(g);
  if (llt.info() == Eigen::Success) return;
  Eigen::SelfAdjointEigenSolver<Mat<Scalar>> es(g, Eigen::EigenvaluesOnly);
  const Scalar lmin = es.eigenvalues()(0);
  throw DegeneracyError(what + ": not positive definite at " + format_point(x) +
                            " (smallest eigenvalue " + std::to_string(static_cast<double>(lmin)) + ")",
                        x.template cast<double>(), static_cast<double>(lmin));
}

/// g' = g / A^2. When g carries analytic Christoffel symbols and A an analytic
/// gradient, the transformed chart gets analytic symbols too.
template <typename Scalar>
MetricChart<Scalar> conformal_transform(const MetricChart<Scalar>& g, const ScalarField<Scalar>& a) {
  using Point = Vec<Scalar>;
  using Matrix = Mat<Scalar>;
  auto factor_at = [a](const Point& x) {
    const Scalar v = a(x);
    if (!(v > Scalar(0)))
      throw InvariantViolation("conformal factor " + a.label() + " is not positive at " + format_point(x));
    return v;
  };
  typename MetricChart<Scalar>::Evaluator eval = [g, factor_at](const Point& x) -> Matrix {
    const Scalar v = factor_at(x);
    return g.components(x) / (v * v);
  };
  typename MetricChart<Scalar>::ChristoffelEvaluator gamma;
  if (g.has_analytic_christoffel() && a.has_gradient()) {
    gamma = [g, a, factor_at](const Point& x, Christoffel<Scalar>& out) {
      g.analytic_christoffel()(x, out);
      const int n = g.dim();
      const Scalar v = factor_at(x);
      const Point dlog = a.gradient(x) / v;  // d(ln A)
      const Matrix gx = g.components(x);
      const Point raised = gx.ldlt().solve(dlog);
      for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) {
            Scalar corr = -gx(i, j) * raised(k);
            if (k == i) corr += dlog(j);
            if (k == j) corr += dlog(i);
            out(k, i, j) -= corr;
          }
    };
  }
  return MetricChart<Scalar>(g.domain(), std::move(eval), g.label() + "/(" + a.label() + ")^2",
                             std::move(gamma));
}

/// g = h - s. Positive-definiteness is checked at every evaluation.
template <typename Scalar>
MetricChart<Scalar> subtract_tensor(const MetricChart<Scalar>& h, const SymTensorField<Scalar>& s) {
  using Point = Vec<Scalar>;
  using Matrix = Mat<Scalar>;
  if (!s.declared_nonnegative())
    throw InvariantViolation("subtract_tensor: tensor " + s.label() + " is not declared non-negative");
  std::string label = h.label() + " - " + s.label();
  typename MetricChart<Scalar>::Evaluator eval = [h, s, label](const Point& x) -> Matrix {
    Matrix d = h.components(x) - s(x);
    require_positive_definite<Scalar>(d, x, label);
    return d;
  };
  return MetricChart<Scalar>(h.domain(), std::move(eval), std::move(label));
}

/// g = h + s, the inverse of subtract_tensor.
template <typename Scalar>
MetricChart<Scalar> add_tensor(const MetricChart<Scalar>& h, const SymTensorField<Scalar>& s) {
  using Point = Vec<Scalar>;
  typename MetricChart<Scalar>::Evaluator eval = [h, s](const Point& x) -> Mat<Scalar> {
    return h.components(x) + s(x);
  };
  return MetricChart<Scalar>(h.domain(), std::move(eval), h.label() + " + " + s.label());
}

/// Pull a metric back along a coordinate change y = map(x): G'(x) = J^T G(map(x)) J.
template <typename Scalar>
MetricChart<Scalar> pullback(const MetricChart<Scalar>& target, std::function<Vec<Scalar>(const Vec<Scalar>&)> map,
                             std::function<Mat<Scalar>(const Vec<Scalar>&)> jacobian, Domain<Scalar> domain,
                             std::string label) {
  using Point = Vec<Scalar>;
  typename MetricChart<Scalar>::Evaluator eval = [target, map, jacobian](const Point& x) -> Mat<Scalar> {
    const Mat<Scalar> j = jacobian(x);
    return j.transpose() * target.components(map(x)) * j;
  };
  return MetricChart<Scalar>(std::move(domain), std::move(eval), std::move(label));
}

/// Pointwise order g <= h on the sampled points: all eigenvalues of H - G are
/// >= -tol, and g(v,v) <= h(v,v) + tol for every sampled v.
template <typename Scalar>
bool metric_leq(const MetricChart<Scalar>& g, const MetricChart<Scalar>& h, const std::vector<Vec<Scalar>>& points,
                const std::vector<Vec<Scalar>>& vectors, Scalar tol = Scalar(1e-12)) {
  if (g.dim() != h.dim()) throw ConfigurationError("metric_leq: charts have different dimensions");
  for (const auto& v : vectors)
    if (v.size() != g.dim()) throw ConfigurationError("metric_leq: sample vector has wrong dimension");
  for (const auto& x : points) {
    if (x.size() != g.dim()) throw ConfigurationError("metric_leq: sample point has wrong dimension");
    const Mat<Scalar> gx = g.at(x);
    const Mat<Scalar> hx = h.at(x);
    const Mat<Scalar> diff = hx - gx;
    Eigen::SelfAdjointEigenSolver<Mat<Scalar>> es(diff, Eigen::EigenvaluesOnly);
    const Scalar scale = std::max<Scalar>(Scalar(1), hx.cwiseAbs().maxCoeff());
    if (es.eigenvalues()(0) < -tol * scale) return false;
    for (const auto& v : vectors)
      if (v.dot(gx * v) > v.dot(hx * v) + tol * scale * v.squaredNorm()) return false;
  }
  return true;
}

/// Default finite-difference step for coordinate i at x.
template <typename Scalar>
Scalar christoffel_step(const Vec<Scalar>& x, int i) {
  using std::abs;
  return std::max<Scalar>(Scalar(1e-5), Scalar(1e-5) * abs(x(i)));
}

/// Christoffel symbols at x into a preallocated buffer. fd_step <= 0 selects
/// the default per-coordinate step.
template <typename Scalar>
void christoffel_into(const MetricChart<Scalar>& chart, const Vec<Scalar>& x, Scalar fd_step,
                      Christoffel<Scalar>& out) {
  const int n = chart.dim();
  if (out.dim != n) out.resize(n);
  if (chart.has_analytic_christoffel()) {
    chart.analytic_christoffel()(x, out);
    return;
  }
  const Mat<Scalar> g = chart.components(x);
  Eigen::LDLT<Mat<Scalar>> ldlt(g);
  const Scalar rc = ldlt.rcond();
  if (ldlt.info() != Eigen::Success || !(rc > Scalar(1e-12)))
    throw ConditioningError(chart.label() + ": metric is near-singular at " + format_point(x));
  // dg[l](i,j) = d_l g_ij
  std::vector<Mat<Scalar>> dg(static_cast<std::size_t>(n));
  Vec<Scalar> xp = x, xm = x;
  for (int l = 0; l < n; ++l) {
    const Scalar h = fd_step > Scalar(0) ? fd_step : christoffel_step(x, l);
    xp(l) = x(l) + h;
    xm(l) = x(l) - h;
    dg[l] = (chart.components(xp) - chart.components(xm)) / (Scalar(2) * h);
    xp(l) = x(l);
    xm(l) = x(l);
  }
  const Mat<Scalar> ginv = ldlt.solve(Mat<Scalar>::Identity(n, n));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      // first-kind symbols Gamma_{l,ij}
      Vec<Scalar> first(n);
      for (int l = 0; l < n; ++l) first(l) = Scalar(0.5) * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
      const Vec<Scalar> second = ginv * first;
      for (int k = 0; k < n; ++k) {
        out(k, i, j) = second(k);
        out(k, j, i) = second(k);
      }
    }
}

template <typename Scalar>
Christoffel<Scalar> christoffel(const MetricChart<Scalar>& chart, const Vec<Scalar>& x, Scalar fd_step = Scalar(0)) {
  chart.domain().require(x, "christoffel");
  Christoffel<Scalar> out(chart.dim());
  christoffel_into(chart, x, fd_step, out);
  return out;
}

/// Non-negativity spot check of a tensor field: v^T S(x) v >= -tol |v|^2 for
/// the sampled vectors. Throws InvariantViolation naming the first violation.
template <typename Scalar>
void check_nonnegative(const SymTensorField<Scalar>& s, const Vec<Scalar>& x, const std::vector<Vec<Scalar>>& vectors,
                       Scalar tol = Scalar(1e-12)) {
  const Mat<Scalar> sx = s(x);
  for (const auto& v : vectors)
    if (v.dot(sx * v) < -tol * v.squaredNorm())
      throw InvariantViolation("tensor " + s.label() + " is negative at " + format_point(x) + " along " +
                               format_point(v));
}

}  // namespace conformal
