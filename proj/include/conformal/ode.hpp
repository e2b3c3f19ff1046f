#pragma once

#include "conformal/core.hpp"

#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

namespace conformal {

struct OdeOptions {
  double atol = 1e-9;
  double rtol = 1e-9;
  double initial_step = 0.0;  // 0 selects a step automatically
  double min_step = 1e-13;
  // Accepted steps are capped at max(max_step_floor, max_step_relative * |t - t0|).
  double max_step_floor = std::numeric_limits<double>::infinity();
  double max_step_relative = std::numeric_limits<double>::infinity();
  std::size_t max_steps = 5'000'000;
};

enum class OdeStatus {
  ReachedEnd,
  LeftAdmissibleRegion,  // could not step further without leaving the admissible set
  StepUnderflow,         // error control drove the step below min_step
  MaxStepsExceeded,
  NonFinite,
};

const char* to_string(OdeStatus s);

struct OdeSolution {
  std::vector<double> t;
  std::vector<Vecd> y;
  OdeStatus status = OdeStatus::ReachedEnd;
  std::size_t rejected_steps = 0;
  std::size_t rhs_evaluations = 0;
};

using OdeRhs = std::function<void(double t, const Vecd& y, Vecd& dydt)>;
using OdeAdmissible = std::function<bool(const Vecd& y)>;
using OdeObserver = std::function<void(double t, const Vecd& y)>;

/// Dormand-Prince 5(4) with local extrapolation and FSAL. Every accepted step
/// is recorded. Stage states outside the admissible set are never passed to
/// the right-hand side; the step is shrunk instead. With an observer, accepted
/// states go to it (including the initial one) and only `t` is stored.
OdeSolution integrate_dopri45(const OdeRhs& rhs, double t0, const Vecd& y0, double t_end, const OdeOptions& options,
                              const OdeAdmissible& admissible = {}, const OdeObserver& observe = {});

}  // namespace conformal
