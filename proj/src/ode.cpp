#include "conformal/ode.hpp"

#include <algorithm>
#include <cmath>

namespace conformal {

const char* to_string(OdeStatus s) {
  switch (s) {
    case OdeStatus::ReachedEnd:
      return "reached-end";
    case OdeStatus::LeftAdmissibleRegion:
      return "left-admissible-region";
    case OdeStatus::StepUnderflow:
      return "step-underflow";
    case OdeStatus::MaxStepsExceeded:
      return "max-steps-exceeded";
    case OdeStatus::NonFinite:
      return "non-finite";
  }
  return "unknown";
}

namespace {

// Dormand & Prince (1980) RK5(4)7M tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// b - bhat
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200, e6 = 22.0 / 525,
                 e7 = -1.0 / 40;

double error_norm(const Vecd& err, const Vecd& y, const Vecd& ynew, double atol, double rtol) {
  double acc = 0;
  const Eigen::Index n = err.size();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double sc = atol + rtol * std::max(std::abs(y(i)), std::abs(ynew(i)));
    const double r = err(i) / sc;
    acc += r * r;
  }
  return std::sqrt(acc / static_cast<double>(n));
}

}  // namespace

OdeSolution integrate_dopri45(const OdeRhs& rhs, double t0, const Vecd& y0, double t_end, const OdeOptions& opt,
                              const OdeAdmissible& admissible, const OdeObserver& observe) {
  OdeSolution sol;
  auto record = [&](double t, const Vecd& y) {
    sol.t.push_back(t);
    if (observe)
      observe(t, y);
    else
      sol.y.push_back(y);
  };
  record(t0, y0);
  const double span = t_end - t0;
  if (!(span > 0)) return sol;

  const Eigen::Index n = y0.size();
  Vecd k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n), ynew(n), err(n);
  Vecd y = y0;
  double t = t0;
  auto ok = [&](const Vecd& s) { return s.allFinite() && (!admissible || admissible(s)); };

  rhs(t, y, k1);
  ++sol.rhs_evaluations;

  auto cap = [&](double tc) {
    const double rel = opt.max_step_relative * std::abs(tc - t0);
    return std::max(opt.max_step_floor, std::isfinite(rel) ? rel : std::numeric_limits<double>::infinity());
  };

  double h = opt.initial_step;
  if (!(h > 0)) {
    // Hairer-Norsett-Wanner starting step heuristic.
    double d0 = 0, d1 = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double sc = opt.atol + opt.rtol * std::abs(y(i));
      d0 += (y(i) / sc) * (y(i) / sc);
      d1 += (k1(i) / sc) * (k1(i) / sc);
    }
    d0 = std::sqrt(d0 / n);
    d1 = std::sqrt(d1 / n);
    h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h = std::min({h, span, cap(t0)});
  }

  double err_prev = 1e-4;
  while (t < t_end) {
    if (sol.t.size() > opt.max_steps) {
      sol.status = OdeStatus::MaxStepsExceeded;
      return sol;
    }
    h = std::min({h, t_end - t, cap(t)});
    const bool last = (t + h >= t_end);
    if (h < opt.min_step * std::max(1.0, std::abs(t))) {
      sol.status = OdeStatus::StepUnderflow;
      return sol;
    }

    bool inadmissible = false;
    auto stage = [&](const Vecd& state, double tc, Vecd& out) {
      if (inadmissible) return;
      if (!ok(state)) {
        inadmissible = true;
        return;
      }
      rhs(tc, state, out);
      ++sol.rhs_evaluations;
    };

    tmp.noalias() = y + h * a21 * k1;
    stage(tmp, t + c2 * h, k2);
    tmp.noalias() = y + h * (a31 * k1 + a32 * k2);
    stage(tmp, t + c3 * h, k3);
    tmp.noalias() = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
    stage(tmp, t + c4 * h, k4);
    tmp.noalias() = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    stage(tmp, t + c5 * h, k5);
    tmp.noalias() = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    stage(tmp, t + h, k6);
    if (!inadmissible) {
      ynew.noalias() = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
      stage(ynew, t + h, k7);
    }
    if (inadmissible) {
      ++sol.rejected_steps;
      h *= 0.25;
      if (h < opt.min_step * std::max(1.0, std::abs(t))) {
        sol.status = OdeStatus::LeftAdmissibleRegion;
        return sol;
      }
      continue;
    }

    err.noalias() = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    const double en = error_norm(err, y, ynew, opt.atol, opt.rtol);
    if (!std::isfinite(en)) {
      sol.status = OdeStatus::NonFinite;
      return sol;
    }
    if (en <= 1.0) {
      // PI step-size controller (beta = 0.04).
      double fac = 0.9 * std::pow(en, -0.2 + 0.08) * std::pow(err_prev, 0.04);
      if (en == 0.0) fac = 10.0;
      fac = std::clamp(fac, 0.2, 10.0);
      err_prev = std::max(en, 1e-4);
      t = last ? t_end : t + h;
      y.swap(ynew);
      k1.swap(k7);
      record(t, y);
      h *= fac;
    } else {
      ++sol.rejected_steps;
      h *= std::max(0.2, 0.9 * std::pow(en, -0.2));
    }
  }
  sol.status = OdeStatus::ReachedEnd;
  return sol;
}

}  // namespace conformal
