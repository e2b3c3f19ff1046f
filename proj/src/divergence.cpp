#include "conformal/divergence.hpp"

#include "conformal/core.hpp"
#include "conformal/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace conformal {

const char* to_string(IntegralKind k) {
  switch (k) {
    case IntegralKind::Converges:
      return "converges";
    case IntegralKind::Diverges:
      return "diverges";
    case IntegralKind::Inconclusive:
      return "inconclusive";
  }
  return "unknown";
}

const char* to_string(DivergenceRate r) {
  switch (r) {
    case DivergenceRate::None:
      return "none";
    case DivergenceRate::Logarithmic:
      return "logarithmic";
    case DivergenceRate::Power:
      return "power";
    case DivergenceRate::Faster:
      return "faster";
  }
  return "unknown";
}

std::vector<double> default_horizons(double max_horizon) {
  std::vector<double> out;
  for (double t = 10.0; t <= max_horizon * (1 + 1e-12); t *= 2) out.push_back(t);
  return out;
}

std::vector<double> finite_end_horizons(double length, int count) {
  if (!(length > 0)) throw ConfigurationError("finite_end_horizons: length must be positive");
  std::vector<double> out;
  for (int k = 1; k <= count; ++k) out.push_back(length * (1.0 - std::ldexp(1.0, -k)));
  return out;
}

IntegralVerdict classify_truncations(const std::vector<double>& horizons, const std::vector<double>& truncations,
                                     const ClassifierOptions& opt) {
  if (horizons.size() != truncations.size())
    throw ConfigurationError("classifier: horizons and truncations differ in length");
  if (horizons.size() < 4) throw ConfigurationError("classifier: at least 4 horizons are required");
  for (std::size_t k = 1; k < horizons.size(); ++k)
    if (!(horizons[k] > horizons[k - 1])) throw ConfigurationError("classifier: horizons must increase");

  IntegralVerdict v;
  v.horizons = horizons;
  v.truncations = truncations;
  const std::size_t n = truncations.size();
  for (std::size_t k = 0; k < n; ++k) {
    if (!std::isfinite(truncations[k])) throw InputError("classifier: non-finite truncation");
    if (k > 0 && truncations[k] < truncations[k - 1] - 1e-12 * std::max(1.0, std::abs(truncations[k])))
      throw InputError("classifier: truncations decrease at T = " + std::to_string(horizons[k]) +
                       " (integrand not positive)");
  }

  const double last = truncations.back();
  const double negligible = 1e-14 * std::max(1.0, std::abs(last));
  std::vector<double> inc(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) inc[k] = std::max(0.0, truncations[k + 1] - truncations[k]);

  // ratio[j] = inc[j+1] / inc[j]
  std::vector<double> ratio(inc.size() - 1);
  for (std::size_t j = 0; j + 1 < inc.size(); ++j) {
    const bool a0 = inc[j] <= negligible, a1 = inc[j + 1] <= negligible;
    if (a1)
      ratio[j] = 0.0;
    else if (a0)
      ratio[j] = std::numeric_limits<double>::infinity();
    else
      ratio[j] = inc[j + 1] / inc[j];
  }
  const std::size_t w = std::min<std::size_t>(static_cast<std::size_t>(std::max(1, opt.window)), ratio.size());
  const std::size_t first = ratio.size() - w;

  bool shrinking = true, growing = true;
  for (std::size_t j = first; j < ratio.size(); ++j) {
    shrinking = shrinking && ratio[j] <= opt.converge_ratio;
    growing = growing && ratio[j] >= opt.diverge_ratio;
  }

  std::ostringstream note;
  note.precision(4);
  note << "last increment ratios:";
  for (std::size_t j = first; j < ratio.size(); ++j) note << ' ' << ratio[j];

  if (shrinking) {
    // Aitken extrapolation I + d r / (1 - r) at the last two points of the window.
    auto limit_at = [&](std::size_t j) {
      const double r = ratio[j];
      return truncations[j + 2] + inc[j + 1] * r / (1.0 - r);
    };
    const double l1 = limit_at(ratio.size() - 1);
    const double l0 = w >= 2 ? limit_at(ratio.size() - 2) : l1;
    const double spread = std::abs(l1 - l0);
    note << "; extrapolated limit " << l1 << " (spread " << spread << ")";
    if (spread <= opt.tol * std::max(std::abs(l1), 1e-300)) {
      v.kind = IntegralKind::Converges;
      v.value = l1;
    } else {
      note << "; limit not stable within tolerance";
    }
    v.note = note.str();
    return v;
  }

  if (growing) {
    bool bounded_below = true;
    for (std::size_t j = first + 1; j < inc.size(); ++j) {
      if (opt.min_increment > 0 ? inc[j] < opt.min_increment : inc[j] <= negligible * 1e2) bounded_below = false;
    }
    if (bounded_below) {
      v.kind = IntegralKind::Diverges;
      const double e = std::log2(ratio.back());
      if (e < 0.15) {
        v.rate = DivergenceRate::Logarithmic;
      } else if (e <= 8.0) {
        v.rate = DivergenceRate::Power;
        v.rate_exponent = e;
      } else {
        v.rate = DivergenceRate::Faster;
      }
    } else {
      note << "; increments fall below the required lower bound " << opt.min_increment;
    }
  }
  v.note = note.str();
  return v;
}

IntegralVerdict classify_improper_integral(const std::function<double(double)>& integrand,
                                           const std::vector<double>& horizons, const ClassifierOptions& opt) {
  std::vector<double> trunc;
  trunc.reserve(horizons.size());
  double acc = 0, prev = 0;
  for (double t : horizons) {
    if (!(t > prev)) throw ConfigurationError("classifier: horizons must be positive and increasing");
    acc += integrate_adaptive(integrand, prev, t, 1e-14, 1e-13, 4000).value;
    trunc.push_back(acc);
    prev = t;
  }
  return classify_truncations(horizons, trunc, opt);
}

}  // namespace conformal
