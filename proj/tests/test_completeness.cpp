#include "conformal/builtins.hpp"
#include "conformal/manifold_file.hpp"

#include <doctest.h>

#include <cmath>

using namespace conformal;

namespace {

Vecd vec(std::initializer_list<double> v) {
  Vecd x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double d : v) x(i++) = d;
  return x;
}

const Vecd& cylinder_base() {
  static const Vecd x0 = vec({0, M_PI / 2, 0});
  return x0;
}

VerdictConfig small_config() {
  VerdictConfig c;
  c.rays = 6;
  c.horizon = 2000;
  return c;
}

ScalarFieldd expr(const char* s, int dim = 3) { return scalar_field_from_expression(s, dim); }

// Ray x(s) = x0 + s e_rho on the cylinder, with a grid fine near 0 and geometric beyond.
CurvePath radial_ray(double horizon, double sign = 1) {
  std::vector<double> grid = linspace(0, 10, 1001);
  for (double t = 10 * 1.01; t < horizon; t *= 1.01) grid.push_back(t);
  grid.push_back(horizon);
  CurvePath c = make_curve([sign](double s) { return vec({sign * s, M_PI / 2, 0}); },
                           [sign](double) { return vec({sign, 0, 0}); }, grid);
  c.arclength = true;
  return c;
}

}  // namespace

TEST_SUITE("completeness") {
  TEST_CASE("weighted line integral with unit weight is the curve length") {
    const auto cyl = cylinder_metric();
    const CurvePath c = make_curve([](double t) { return vec({t, 1 + 0.3 * std::sin(t), t * t}); },
                                   [](double t) { return vec({1, 0.3 * std::cos(t), 2 * t}); }, linspace(0, 3, 300));
    CHECK(weighted_line_integral(ScalarFieldd::constant(1.0), c, cyl) ==
          doctest::Approx(curve_length(c, cyl)).epsilon(1e-14));
  }

  TEST_CASE("identity factor: truncations equal the horizons") {
    const auto cyl = cylinder_metric();
    const CurvePath ray = radial_ray(1280);
    const auto hz = default_horizons(1280);
    const auto tr = weighted_truncations(ScalarFieldd::constant(1.0), ray, cyl, hz);
    for (std::size_t k = 0; k < hz.size(); ++k) CHECK(tr[k] == doctest::Approx(hz[k]).epsilon(1e-12));
  }

  TEST_CASE("flat 1D: integral of 1/(1+x^2) along the unit ray") {
    const auto f1 = flat_metric(1);
    std::vector<double> grid = linspace(0, 10, 2001);
    for (double t = 10 * 1.005; t < 1e8; t *= 1.005) grid.push_back(t);
    grid.push_back(1e8);
    const CurvePath c = make_curve([](double s) { return vec({s}); }, [](double) { return vec({1}); }, grid);
    const ScalarFieldd f([](const Vecd& x) { return 1 / (1 + x(0) * x(0)); }, "1/(1+x^2)");
    CHECK(std::abs(weighted_line_integral(f, c, f1) - M_PI / 2) < 1e-6);
    const auto tr = weighted_truncations(f, c, f1, {1.0, 10.0});
    CHECK(tr[0] == doctest::Approx(M_PI / 4).epsilon(1e-10));
    CHECK(tr[1] == doctest::Approx(std::atan(10.0)).epsilon(1e-10));
  }

  TEST_CASE("truncation horizons are validated") {
    const auto cyl = cylinder_metric();
    const CurvePath ray = radial_ray(100);
    CHECK_THROWS_AS(weighted_truncations(ScalarFieldd::constant(1.0), ray, cyl, {10, 200}), ConfigurationError);
    CHECK_THROWS_AS(weighted_truncations(ScalarFieldd::constant(1.0), ray, cyl, {20, 10}), ConfigurationError);
  }

  TEST_CASE("classifier examples") {
    const auto hz = default_horizons(1e5);
    const auto log_div = classify_improper_integral([](double s) { return 1 / (s + 1); }, hz);
    CHECK(log_div.kind == IntegralKind::Diverges);
    CHECK(log_div.rate == DivergenceRate::Logarithmic);

    const auto conv = classify_improper_integral([](double s) { return 1 / (s * s + 1); }, hz);
    REQUIRE(conv.kind == IntegralKind::Converges);
    CHECK(std::abs(conv.value - M_PI / 2) < 1e-4);

    const auto lin = classify_improper_integral([](double) { return 1.0; }, hz);
    CHECK(lin.kind == IntegralKind::Diverges);
    CHECK(lin.rate == DivergenceRate::Power);
    CHECK(lin.rate_exponent == doctest::Approx(1.0).epsilon(1e-6));

    const auto exp_conv = classify_improper_integral([](double s) { return std::exp(-s); }, hz);
    REQUIRE(exp_conv.kind == IntegralKind::Converges);
    CHECK(std::abs(exp_conv.value - 1.0) < 1e-10);
  }

  TEST_CASE("classifier on linear and superlinear profiles over a grid of constants") {
    const auto hz = default_horizons(1e6);
    for (double c1 : {0.1, 1.0, 10.0})
      for (double c2 : {0.1, 1.0, 10.0}) {
        CHECK(classify_improper_integral([=](double s) { return 1 / (c1 * s + c2); }, hz).kind == IntegralKind::Diverges);
        for (double eps : {0.2, 1.0, 2.0}) {
          const auto v = classify_improper_integral([=](double s) { return 1 / (c1 * std::pow(s, 1 + eps) + c2); }, hz);
          CHECK(v.kind == IntegralKind::Converges);
        }
      }
  }

  TEST_CASE("classifier input checks") {
    CHECK_THROWS_AS(classify_truncations({10, 20, 40}, {1, 2, 3}), ConfigurationError);
    CHECK_THROWS_AS(classify_truncations({10, 20, 40, 80}, {1, 2, 1.5, 3}), InputError);
    CHECK_THROWS_AS(classify_truncations({10, 20, 40, 80}, {1, 2, 3}), ConfigurationError);
    const auto flat = classify_truncations({10, 20, 40, 80, 160}, {1, 1, 1, 1, 1});
    CHECK(flat.kind == IntegralKind::Converges);
    CHECK(flat.value == 1.0);
  }

  TEST_CASE("slowly varying increments are inconclusive") {
    // increments shrink like 1/k: neither geometric nor bounded below at the floor
    std::vector<double> hz, tr;
    double acc = 0;
    for (int k = 0; k < 10; ++k) {
      hz.push_back(10 * std::pow(2.0, k));
      acc += 1.0 / (k + 1);
      tr.push_back(acc);
    }
    ClassifierOptions o;
    o.min_increment = 0.2;
    CHECK(classify_truncations(hz, tr, o).kind == IntegralKind::Inconclusive);
  }

  TEST_CASE("default and finite-end horizon schedules") {
    const auto hz = default_horizons(1e4);
    REQUIRE(hz.size() == 10);
    CHECK(hz.front() == 10);
    CHECK(hz.back() == 5120);
    const auto fe = finite_end_horizons(2.0, 4);
    REQUIRE(fe.size() == 4);
    CHECK(fe[0] == 1.0);
    CHECK(fe[3] == doctest::Approx(2.0 * (1 - 1.0 / 16)));
  }

  TEST_CASE("growth: linear factor on the cylinder") {
    const auto cyl = cylinder_metric();
    std::vector<CurvePath> rays;
    for (const auto& r : spray_rays(cyl, cylinder_base(), 4, 1000, 3, SprayOptions{{}, {}, true, 0}))
      if (r.escape.escaped) rays.push_back(r.path);
    const auto g = fit_growth(expr("abs(x1)+1"), cyl, cylinder_base(), rays);
    CHECK(g.kind == GrowthKind::AtMostLinear);
    CHECK(g.c1 <= 1 + 1e-6);
    CHECK(g.c1 >= 1 - 1e-6);
    CHECK(g.c2 == doctest::Approx(1.0));
    // the constants certify every sample along every ray
    for (const auto& r : rays)
      for (std::size_t i = 0; i < r.size(); i += 97)
        CHECK(std::abs(r.points[i](0)) + 1 <= g.c1 * r.params[i] + g.c2 + 1e-9);
  }

  TEST_CASE("growth: quadratic factor on the cylinder") {
    const auto cyl = cylinder_metric();
    std::vector<CurvePath> rays;
    for (const auto& r : spray_rays(cyl, cylinder_base(), 4, 1000, 3, SprayOptions{{}, {}, true, 0}))
      if (r.escape.escaped) rays.push_back(r.path);
    const auto g = fit_growth(expr("x1^2+1"), cyl, cylinder_base(), rays);
    REQUIRE(g.kind == GrowthKind::Superlinear);
    CHECK(g.eps >= 0.8);
    CHECK(g.c1 > 0);
    CHECK(g.c2 > 0);
    for (const auto& r : rays)
      for (std::size_t i = 0; i < r.size(); i += 97) {
        const double f = r.points[i](0) * r.points[i](0) + 1;
        CHECK(f >= g.c1 * std::pow(r.params[i], 1 + g.eps) + g.c2 - 1e-9);
      }
  }

  TEST_CASE("growth: logarithmic factor in the r coordinate is at most linear") {
    const auto m = cylinder_radial_metric();
    const Vecd x0 = vec({1, M_PI / 2, 0});
    const ScalarFieldd a([](const Vecd& x) { return 2 * std::abs(std::log(x(0))) + 3; }, "2|ln r|+3");
    std::vector<CurvePath> rays;
    for (double sgn : {1.0, -1.0}) {
      CurvePath c = integrate_geodesic(m, x0, vec({sgn, 0, 0}), 300.0);
      if (c.end != CurveEnd::Horizon) continue;  // r = e^-300 is below the puncture stop margin
      c.arclength = true;
      rays.push_back(c);
    }
    CurvePath up = radial_ray(300);
    // rho-rays pushed to r = e^rho
    for (auto& p : up.points) p(0) = std::exp(p(0));
    for (std::size_t i = 0; i < up.size(); ++i) up.velocities[i](0) = up.points[i](0);
    rays.push_back(up);
    const auto g = fit_growth(a, m, x0, rays);
    CHECK(g.kind == GrowthKind::AtMostLinear);
    CHECK(g.c1 <= 2 + 1e-6);
  }

  TEST_CASE("growth error conditions") {
    const auto cyl = cylinder_metric();
    const CurvePath ray = radial_ray(1000);
    CHECK_THROWS_AS(fit_growth(expr("1"), cyl, cylinder_base(), {ray}), InsufficientDataError);
    CHECK_THROWS_AS(fit_growth(expr("1"), cyl, cylinder_base(), {radial_ray(50), radial_ray(50, -1)}),
                    InsufficientDataError);
    CHECK_THROWS_AS(fit_growth(expr("1"), cyl, vec({1, M_PI / 2, 0}), {ray, radial_ray(1000, -1)}), ConfigurationError);
  }

  TEST_CASE("verdicts on the cylinder at reduced size") {
    const auto cyl = cylinder_metric();
    const auto one = completeness_verdict(cyl, expr("1"), cylinder_base(), small_config());
    CHECK(one.kind == VerdictKind::Complete);
    REQUIRE(one.certificate);
    CHECK(one.certificate->kind == GrowthKind::AtMostLinear);

    const auto lin = completeness_verdict(cyl, log_conformal_factor(1, 1), cylinder_base(), small_config());
    CHECK(lin.kind == VerdictKind::Complete);
    REQUIRE(lin.certificate);
    CHECK(lin.certificate->c1 <= 1 + 1e-6);
    CHECK(lin.certificate->c2 <= 1 + 1e-6);
    for (const auto& t : lin.tables) CHECK(t.verdict.kind == IntegralKind::Diverges);

    const auto ex = completeness_verdict(cyl, expr("exp(abs(x1))"), cylinder_base(), small_config());
    REQUIRE(ex.kind == VerdictKind::Incomplete);
    REQUIRE(ex.length_bound);
    CHECK(std::abs(*ex.length_bound - 1.0) < 1e-6);
    REQUIRE(ex.witness);
    CHECK(escape_monitor(*ex.witness, Exhaustion::dyadic(cylinder_base()), cyl.domain()).escaped);

    const auto quad = completeness_verdict(cyl, expr("x1^2+1"), cylinder_base(), small_config());
    REQUIRE(quad.kind == VerdictKind::Incomplete);
    CHECK(std::abs(*quad.length_bound - M_PI / 2) < 1e-3);
  }

  TEST_CASE("witness soundness and scaling covariance") {
    const auto cyl = cylinder_metric();
    const ScalarFieldd a = expr("exp(abs(x1))");
    const auto v = completeness_verdict(cyl, a, cylinder_base(), small_config());
    REQUIRE(v.kind == VerdictKind::Incomplete);
    const double len = curve_length(*v.witness, conformal_transform(cyl, a));
    CHECK(std::abs(len - *v.length_bound) < 1e-4);

    const ScalarFieldd a3 = expr("3*exp(abs(x1))");
    const auto v3 = completeness_verdict(cyl, a3, cylinder_base(), small_config());
    REQUIRE(v3.kind == VerdictKind::Incomplete);
    CHECK(std::abs(*v3.length_bound - *v.length_bound / 3) < 1e-6);

    const auto lin3 = completeness_verdict(cyl, expr("0.25*(abs(x1)+1)"), cylinder_base(), small_config());
    CHECK(lin3.kind == VerdictKind::Complete);
  }

  TEST_CASE("supplied curves: finer grids give the same verdict") {
    const auto cyl = cylinder_metric();
    VerdictConfig c = small_config();
    c.rays = 2;
    c.include_axis_rays = false;
    // a non-geodesic escaping curve: a helix drifting out in rho
    const CurvePath helix = make_curve([](double t) { return vec({t, M_PI / 2 + 0.3 * std::sin(t), t}); },
                                       [](double t) { return vec({1, 0.3 * std::cos(t), 1}); }, linspace(0, 3000, 30001));
    c.extra_curves = {helix};
    const auto v1 = completeness_verdict(cyl, expr("x1^2+1"), cylinder_base(), c);
    c.extra_curves = {refine(helix, 2)};
    const auto v2 = completeness_verdict(cyl, expr("x1^2+1"), cylinder_base(), c);
    CHECK(v1.kind == VerdictKind::Incomplete);
    CHECK(v1.kind == v2.kind);
    const auto& t1 = v1.tables.back().verdict;
    const auto& t2 = v2.tables.back().verdict;
    CHECK(t1.kind == t2.kind);
    CHECK(t1.value == doctest::Approx(t2.value).epsilon(1e-8));
  }

  TEST_CASE("punctured space with a puncture-approaching curve is incomplete") {
    const auto delta = punctured_euclidean();
    VerdictConfig c;
    c.rays = 4;
    c.horizon = 500;
    c.base_complete = false;
    c.extra_curves = {make_curve([](double t) { return vec({1 - t, M_PI / 2, 0}); },
                                 [](double) { return vec({-1, 0, 0}); }, linspace(0, 1 - 1e-9, 4001))};
    const auto v = completeness_verdict(delta, ScalarFieldd::constant(1.0), vec({1, M_PI / 2, 0}), c);
    CHECK(v.kind == VerdictKind::Incomplete);
    REQUIRE(v.length_bound);
    CHECK(*v.length_bound == doctest::Approx(1.0).epsilon(1e-6));
  }

  TEST_CASE("an unasserted base metric never yields Complete") {
    VerdictConfig c = small_config();
    c.base_complete = false;
    const auto v = completeness_verdict(cylinder_metric(), expr("1"), cylinder_base(), c);
    CHECK(v.kind == VerdictKind::Inconclusive);
  }

  TEST_CASE("trapped base point is inconclusive") {
    // the sphere is compact: no ray escapes
    VerdictConfig c;
    c.rays = 3;
    c.horizon = 200;
    const auto v = completeness_verdict(round_sphere(), ScalarFieldd::constant(1.0), vec({M_PI / 2, 0}), c);
    CHECK(v.kind == VerdictKind::Inconclusive);
    CHECK_FALSE(v.diagnostics.empty());
  }

  TEST_CASE("diameter bound") {
    CHECK(std::abs(diameter_bound(1, 1, 1) - M_PI / 2) < 1e-8);
    // closed form for eps = 1: pi / (2 sqrt(c1 c2))
    for (double c1 : {0.1, 2.0, 10.0})
      for (double c2 : {0.3, 5.0}) CHECK(diameter_bound(1, c1, c2) == doctest::Approx(M_PI / (2 * std::sqrt(c1 * c2))).epsilon(1e-9));
    // eps = 0.5, c1 = c2 = 1: integral of 1/(s^1.5 + 1) is 4 pi / (3 sqrt 3)
    CHECK(diameter_bound(0.5, 1, 1) == doctest::Approx(4 * M_PI / (3 * std::sqrt(3.0))).epsilon(1e-8));
    CHECK(diameter_bound(1, 2, 1) < diameter_bound(1, 1, 1));
    CHECK(diameter_bound(1, 4, 1) < diameter_bound(1, 2, 1));
    CHECK_THROWS_AS(diameter_bound(1, 1, 0), DomainError);
    CHECK_THROWS_AS(diameter_bound(0, 1, 1), DomainError);
    CHECK_THROWS_AS(diameter_bound(-1, 1, 1), DomainError);
  }
}
