#pragma once

#include "conformal/corollary.hpp"

#include <functional>
#include <string>
#include <vector>

namespace conformal {

/// Euclidean metric on R^dim, Cartesian coordinates x1..xn.
MetricChartd flat_metric(int dim);

/// delta = dr^2 + r^2 dOmega^2 on R^3 \ {0}, coordinates (r, theta, phi).
/// r = 0 is a puncture, theta = 0 and pi are chart singularities.
MetricChartd punctured_euclidean(bool analytic_christoffel = true);

/// delta / r^2 in the coordinate rho = ln r: diag(1, 1, sin^2 theta) on
/// R x (0, pi) x S^1, coordinates (rho, theta, phi).
MetricChartd cylinder_metric();

/// delta / r^2 in the original coordinates (r, theta, phi).
MetricChartd cylinder_radial_metric();

/// Round unit 2-sphere, coordinates (theta, phi).
MetricChartd round_sphere();

/// rho = ln r; throws DomainError for r <= 0.
double log_coordinate_map(double r);
double log_coordinate_inverse(double rho);

/// A(rho, Omega) = c1 |rho| + c2 on the cylinder chart.
ScalarFieldd log_conformal_factor(double c1, double c2);

struct BetaBundle {
  MetricChartd h_base;  // the cylinder metric
  OneFormd beta;        // rho / sqrt(rho^2 + 1) d rho
  SymTensorFieldd s;    // beta (x) beta
  MetricChartd g;       // h_base - s, d rho^2 coefficient 1 / (rho^2 + 1)
};

BetaBundle example_beta_bundle();

/// Constants for the bundle at base point x0: c1 = 1, c2 = sqrt(rho0^2 + 1).
CorollaryConstants example_constants(const Vecd& x0);

/// |rho - rho0| sqrt(rho0^2 + 1) >= rho0 (rho - rho0).
bool example_inequality_holds(double rho, double rho0);

struct BuiltinEntry {
  std::string name;
  std::string coordinates;
  std::string description;
  std::string expected;  // documented expectation for the base metric
  bool complete = true;  // whether the base metric is complete
  std::function<MetricChartd()> make;
  Vecd base;  // default base point
};

const std::vector<BuiltinEntry>& builtin_catalog();

/// Throws InputError for unknown names.
const BuiltinEntry& find_builtin(const std::string& name);

}  // namespace conformal
