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

}  // namespace

TEST_SUITE("examples") {
  TEST_CASE("log coordinate map") {
    CHECK(log_coordinate_map(1.0) == 0.0);
    CHECK(log_coordinate_map(M_E) == doctest::Approx(1.0).epsilon(1e-15));
    for (double r : {1e-6, 1.0, 1e6}) CHECK(std::abs(log_coordinate_inverse(log_coordinate_map(r)) - r) <= 1e-14 * r);
    CHECK_THROWS_AS(log_coordinate_map(0.0), DomainError);
    CHECK_THROWS_AS(log_coordinate_map(-2.0), DomainError);
  }

  TEST_CASE("pushforward of delta-tilde is the cylinder metric") {
    const auto radial = cylinder_radial_metric();
    const auto cyl = cylinder_metric();
    const auto pulled = pullback<double>(
        radial, [](const Vecd& x) { return vec({log_coordinate_inverse(x(0)), x(1), x(2)}); },
        [](const Vecd& x) { return vec({log_coordinate_inverse(x(0)), 1, 1}).asDiagonal().toDenseMatrix().eval(); },
        cyl.domain(), "pulled");
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> rho(-10, 10), th(0.01, M_PI - 0.01), ph(0, 2 * M_PI);
    for (int k = 0; k < 100; ++k) {
      const Vecd x = vec({rho(rng), th(rng), ph(rng)});
      CHECK((pulled.at(x) - cyl.at(x)).cwiseAbs().maxCoeff() <= 1e-12);
    }
  }

  TEST_CASE("rho = 0 is r = 1") {
    CHECK(log_coordinate_inverse(0.0) == 1.0);
    const auto radial = cylinder_radial_metric();
    CHECK(radial.at(vec({1, M_PI / 2, 0}))(0, 0) == 1.0);
  }

  TEST_CASE("log conformal factor") {
    const auto a = log_conformal_factor(2.0, 3.0);
    CHECK(a(vec({0, 1, 0})) == 3.0);
    CHECK(a(vec({-2, 1, 0})) == 7.0);
    REQUIRE(a.has_gradient());
    CHECK(a.gradient(vec({-2, 1, 0}))(0) == -2.0);
  }

  TEST_CASE("beta bundle coefficients") {
    const auto b = example_beta_bundle();
    CHECK(b.g.at(vec({1, 1, 0}))(0, 0) == doctest::Approx(0.5));
    for (double rho : {-7.0, 0.0, 0.5, 3.0}) CHECK(b.g.at(vec({rho, 1, 0}))(0, 0) == doctest::Approx(1 / (rho * rho + 1)));
    CHECK(b.beta(vec({3, 1, 0})).squaredNorm() == doctest::Approx(0.9));
    const auto c = example_constants(vec({2, 1, 0}));
    CHECK(c.c1 == 1.0);
    CHECK(c.c2 == doctest::Approx(std::sqrt(5.0)));
  }

  TEST_CASE("catalog entries build and evaluate at their base points") {
    const auto& cat = builtin_catalog();
    CHECK(cat.size() >= 6);
    for (const auto& e : cat) {
      CAPTURE(e.name);
      const MetricChartd m = e.make();
      CHECK(m.dim() == e.base.size());
      CHECK_NOTHROW(m.at(e.base));
      CHECK_FALSE(e.description.empty());
      CHECK_FALSE(e.expected.empty());
      CHECK(&find_builtin(e.name) == &e);
    }
    CHECK_FALSE(find_builtin("punctured").complete);
    CHECK(find_builtin("cylinder").complete);
    CHECK_THROWS_AS(find_builtin("no-such-manifold"), InputError);
  }
}
