#include "conformal/builtins.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace conformal;

namespace {

Vecd vec(std::initializer_list<double> v) {
  Vecd x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double d : v) x(i++) = d;
  return x;
}

SymTensorFieldd constant_tensor(Matd s) {
  return SymTensorFieldd([s](const Vecd&) { return s; }, "S");
}

}  // namespace

TEST_SUITE("tensor") {
  TEST_CASE("tensor norm examples") {
    const auto b = example_beta_bundle();
    for (double rho : {-4.0, -1.0, 0.0, 1.0, 2.5}) {
      const Vecd x = vec({rho, 1.0, 0.5});
      CHECK(tensor_norm(b.s, b.h_base, x) == doctest::Approx(std::sqrt(rho * rho / (rho * rho + 1))).epsilon(1e-13));
    }
    CHECK(tensor_norm(b.s, b.h_base, vec({1, 1, 0})) == doctest::Approx(std::sqrt(0.5)));
    CHECK(tensor_norm(SymTensorFieldd::zero(3), b.h_base, vec({1, 1, 0})) == 0.0);
    CHECK(tensor_norm(constant_tensor(vec({0.25, 0.04}).asDiagonal().toDenseMatrix()), flat_metric(2), vec({0, 0})) ==
          doctest::Approx(0.5));
  }

  TEST_CASE("one-form norm examples") {
    const OneFormd dx([](const Vecd&) { return vec({1}); }, "dx");
    CHECK(oneform_norm(dx, flat_metric(1), vec({3})) == 1.0);
    const auto b = example_beta_bundle();
    CHECK(oneform_norm(b.beta, b.h_base, vec({2, 1, 0})) == doctest::Approx(std::sqrt(0.8)));
    CHECK(oneform_norm(b.beta, b.h_base, vec({3, 1, 0})) * oneform_norm(b.beta, b.h_base, vec({3, 1, 0})) ==
          doctest::Approx(0.9));
    const OneFormd three([b](const Vecd& x) { return Vecd(3 * b.beta(x)); }, "3beta");
    CHECK(oneform_norm(three, b.h_base, vec({2, 1, 0})) ==
          doctest::Approx(3 * oneform_norm(b.beta, b.h_base, vec({2, 1, 0}))).epsilon(1e-15));
  }

  TEST_CASE("tensor norm of beta squared equals the one-form norm") {
    const auto b = example_beta_bundle();
    const auto delta = punctured_euclidean();
    const OneFormd w([](const Vecd& x) { return vec({x(0), std::sin(x(1)), 0.3}); }, "w");
    const SymTensorFieldd ww = w.outer_square();
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> r(0.2, 5), th(0.2, 2.9), ph(0, 6);
    for (int k = 0; k < 50; ++k) {
      const Vecd x = vec({r(rng), th(rng), ph(rng)});
      CHECK(std::abs(tensor_norm(ww, delta, x) - oneform_norm(w, delta, x)) <= 1e-12);
      CHECK(std::abs(tensor_norm(b.s, b.h_base, x) - oneform_norm(b.beta, b.h_base, x)) <= 1e-12);
    }
  }

  TEST_CASE("non positive-definite reference metric is a conditioning error") {
    const MetricChartd bad(Domaind::euclidean(2), [](const Vecd&) { return vec({1, -1}).asDiagonal().toDenseMatrix().eval(); },
                           "indefinite");
    CHECK_THROWS_AS(tensor_norm(SymTensorFieldd::zero(2), bad, vec({0, 0})), ConditioningError);
    CHECK_THROWS_AS(pencil_max_eigenvalue<double>(Matd::Identity(2, 2), Matd::Zero(2, 2)), ConditioningError);
  }

  TEST_CASE("pencil eigenvalue against an eigenvector check") {
    std::mt19937_64 rng(9);
    std::normal_distribution<double> n(0, 1);
    for (int dim = 2; dim <= 5; ++dim) {
      Matd a(dim, dim), c(dim, dim);
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) {
          a(i, j) = n(rng);
          c(i, j) = n(rng);
        }
      const Matd s = a * a.transpose();
      const Matd h = c * c.transpose() + Matd::Identity(dim, dim);
      const double lam = pencil_max_eigenvalue<double>(s, h);
      // det(S - lam H) = 0
      CHECK(std::abs((s - lam * h).determinant()) <= 1e-8 * std::pow(s.norm() + lam * h.norm(), dim));
    }
  }

  TEST_CASE("derived conformal metric") {
    const auto b = example_beta_bundle();
    const auto hp = derived_conformal_metric(b.h_base, b.s);
    const Matd m = hp.at(vec({1, M_PI / 2, 0}));
    CHECK(m(0, 0) == doctest::Approx(0.5));
    CHECK(m(1, 1) == doctest::Approx(0.5));
    CHECK(b.g.at(vec({1, M_PI / 2, 0}))(1, 1) == doctest::Approx(1.0));

    const auto same = derived_conformal_metric(b.h_base, SymTensorFieldd::zero(3));
    CHECK((same.at(vec({2, 1, 1})) - b.h_base.at(vec({2, 1, 1}))).norm() == 0.0);

    std::vector<Vecd> pts, vs;
    for (double rho = -20; rho <= 20; rho += 0.25) pts.push_back(vec({rho, 1.0, 0.5}));
    std::mt19937_64 rng(2);
    std::normal_distribution<double> n(0, 1);
    for (int k = 0; k < 20; ++k) vs.push_back(vec({n(rng), n(rng), n(rng)}));
    CHECK(metric_leq(hp, b.g, pts, vs));

    const auto f = corollary_factor(b.h_base, b.s);
    CHECK(f(vec({1, 1, 0})) == doctest::Approx(std::sqrt(2.0)));
  }

  TEST_CASE("derived metric rejects norms reaching 1") {
    const auto s = constant_tensor(Matd::Identity(2, 2));
    const auto hp = derived_conformal_metric(flat_metric(2), s);
    CHECK_THROWS_AS(hp.at(vec({0, 0})), DegeneracyError);
    CHECK_THROWS_AS(corollary_factor(flat_metric(2), s)(vec({0, 0})), DegeneracyError);
  }

  TEST_CASE("norm field keeps a running supremum") {
    const auto b = example_beta_bundle();
    NormField nf(b.s, b.h_base);
    for (double rho = -5; rho <= 5; rho += 1) nf.sample(vec({rho, 1, 0}));
    CHECK(nf.samples().size() == 11);
    CHECK(nf.sup_estimate() == doctest::Approx(std::sqrt(25.0 / 26)));
    CHECK(std::abs(nf.sup_point()(0)) == 5.0);
    CHECK(nf(vec({100, 1, 0})) > nf.sup_estimate());
    CHECK(nf.samples().size() == 11);
  }

  TEST_CASE("closed-form corollary inequality on the full grid") {
    int failures = 0;
    for (int i = 0; i <= 200; ++i)
      for (int j = 0; j <= 200; ++j)
        if (!example_inequality_holds(-100.0 + i, -100.0 + j)) ++failures;
    CHECK(failures == 0);
  }

  TEST_CASE("corollary inequality mode along rays") {
    const auto b = example_beta_bundle();
    for (double rho0 : {-3.0, 0.0, 2.0}) {
      const Vecd x0 = vec({rho0, M_PI / 2, 0});
      std::vector<CurvePath> rays;
      for (double sgn : {1.0, -1.0}) {
        const CurvePath c = make_curve([=](double s) { return vec({rho0 + sgn * s, M_PI / 2, 0}); },
                                       [=](double) { return vec({sgn, 0, 0}); }, linspace(0, 100, 201));
        rays.push_back(c);
      }
      CorollaryOptions o;
      o.distance = [](const Vecd& x, const Vecd& y) { return std::abs(x(0) - y(0)); };
      const auto rep = corollary_check(b.h_base, b.s, x0, rays, CorollaryMode::Inequality, example_constants, o);
      CHECK(rep.pass);
      CHECK(rep.worst_margin >= -1e-12);
      CHECK(rep.points_checked > 0);
    }
  }

  TEST_CASE("corollary inequality with estimated distances and a failing case") {
    const auto b = example_beta_bundle();
    const Vecd x0 = vec({0, M_PI / 2, 0});
    const CurvePath ray = make_curve([](double s) { return vec({s, M_PI / 2, 0}); }, [](double) { return vec({1, 0, 0}); },
                                     linspace(0, 10, 21));
    CorollaryOptions o;
    o.samples_per_ray = 10;
    const auto rep = corollary_check(b.h_base, b.s, x0, {ray}, CorollaryMode::Inequality, example_constants, o);
    CHECK(rep.pass);
    // constants too small: c2 = 1 with c1 = 0.01 fails away from x0
    const auto bad = corollary_check(b.h_base, b.s, x0, {ray}, CorollaryMode::Inequality,
                                     [](const Vecd&) { return CorollaryConstants{0.01, 1.0}; }, o);
    CHECK_FALSE(bad.pass);
    CHECK(bad.worst_margin < 0);
    CHECK(bad.witness_point.size() == 3);
  }

  TEST_CASE("zero tensor passes the inequality trivially") {
    const auto cyl = cylinder_metric();
    const CurvePath ray = make_curve([](double s) { return vec({s, 1, 0}); }, [](double) { return vec({1, 0, 0}); },
                                     linspace(0, 10, 11));
    const auto rep = corollary_check(cyl, SymTensorFieldd::zero(3), vec({0, 1, 0}), {ray}, CorollaryMode::Inequality,
                                     [](const Vecd&) { return CorollaryConstants{1, 1}; });
    CHECK(rep.pass);
    CHECK(rep.sup_norm_estimate == 0.0);
  }

  TEST_CASE("corollary check raises on norm reaching 1") {
    const auto s = constant_tensor(Matd::Identity(2, 2));
    const CurvePath ray = make_curve([](double t) { return vec({t, 0}); }, [](double) { return vec({1, 0}); },
                                     linspace(0, 1, 3));
    CHECK_THROWS_AS(corollary_check(flat_metric(2), s, vec({0, 0}), {ray}, CorollaryMode::Inequality,
                                    [](const Vecd&) { return CorollaryConstants{1, 1}; }),
                    DegeneracyError);
  }
}
