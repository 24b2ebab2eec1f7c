#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "hts/error.hpp"
#include "hts/priors.hpp"
#include "hts/quadrature.hpp"

// The density of HS(1) at a is (2/pi^3)^{1/2} times
//   I(a) = int_0^{pi/2} cot(u) exp(-a^2 cot^2(u) / 2) du        (lambda = tan u).
// The range is split at lambda = 1 and the upper half is written in
// w = pi/2 - u, so both halves stay well resolved near their endpoints.

namespace hts {

namespace {

constexpr double kPi = std::numbers::pi;
const double kLogTwoK = 0.5 * std::log(2.0 / (kPi * kPi * kPi));
const double kSandwichConst = std::pow(2.0 * kPi, -1.5);

struct Breaks {
  std::vector<double> low;   // u break points in [0, pi/4]
  std::vector<double> high;  // w break points in [0, pi/4]
};

// The integrands depend on lambda through s = a / lambda, where exp(-s^2/2)
// switches on for s in [0, 10]. Unit steps in s resolve that factor; above
// lambda = a the low half behaves like 1/u and gets geometric panels.
Breaks lambda_breaks(double a) {
  Breaks b;
  b.low = {0.0, kPi / 4};
  b.high = {0.0, kPi / 4};
  auto add = [&](double lambda) {
    if (lambda < 1.0) b.low.push_back(std::atan(lambda));
    else if (lambda > 1.0) b.high.push_back(std::atan(1.0 / lambda));
  };
  for (int s = 10; s >= 1; --s) add(a / s);
  for (double lambda = a * std::numbers::e; lambda < 1.0; lambda *= std::numbers::e) add(lambda);
  std::sort(b.low.begin(), b.low.end());
  std::sort(b.high.begin(), b.high.end());
  return b;
}

template <class F>
double panel_sum(const std::vector<double>& cuts, F&& f) {
  static const quad::GaussLegendreRule& rule = quad::gauss_legendre(12);
  double total = 0.0;
  for (std::size_t p = 0; p + 1 < cuts.size(); ++p) {
    const double a = cuts[p], b = cuts[p + 1];
    if (!(b > a)) continue;
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double s = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * f(mid + half * rule.nodes[i]);
    total += half * s;
  }
  return total;
}

// log I(a) for a > 0.
double log_mixing_integral(double a) {
  const double log_a = std::log(a);
  const double offset = a > 1.0 ? 2.0 * log_a : log_a;
  const Breaks b = lambda_breaks(a);
  const double low = panel_sum(b.low, [&](double u) {
    const double c = 1.0 / std::tan(u);
    const double ac = a * c;
    return c * std::exp(-0.5 * ac * ac - offset);
  });
  const double high = panel_sum(b.high, [&](double w) {
    const double t = std::tan(w);
    const double at = a * t;
    return t * std::exp(-0.5 * at * at - offset);
  });
  return std::log(low + high) + offset;
}

}  // namespace

double horseshoe_log_density(double t, double tau) {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw InvalidParameter("horseshoe scale must be positive");
  if (std::isnan(t)) throw InvalidInput("horseshoe density at NaN");
  if (t == 0.0) throw PoleError("horseshoe density has a pole at 0");
  const double a = std::abs(t) / tau;
  if (std::isinf(a)) return -std::numeric_limits<double>::infinity();
  const double value = kLogTwoK + log_mixing_integral(a) - std::log(tau);
#ifndef NDEBUG
  {
    const auto [lo, hi] = horseshoe_sandwich(t, tau);
    // h sits within 2.7 a^{-4} of the lower bound for large a
    assert(std::log(lo) - 1e-13 < value && value < std::log(hi) + 1e-13);
  }
#endif
  return value;
}

double horseshoe_density(double t, double tau) { return std::exp(horseshoe_log_density(t, tau)); }

std::pair<double, double> horseshoe_sandwich(double t, double tau) {
  if (!(tau > 0.0)) throw InvalidParameter("horseshoe scale must be positive");
  if (t == 0.0) throw PoleError("horseshoe density has a pole at 0");
  const double r = tau / t;
  const double r2 = r * r;
  return {kSandwichConst / tau * std::log1p(4.0 * r2), 2.0 * kSandwichConst / tau * std::log1p(2.0 * r2)};
}

std::pair<double, double> horseshoe_sandwich_margins(double t, double tau) {
  if (!(tau > 0.0)) throw InvalidParameter("horseshoe scale must be positive");
  if (t == 0.0) throw PoleError("horseshoe density has a pole at 0");
  const double z = 0.5 * (t / tau) * (t / tau);
  if (z < 64.0) {
    const double h = horseshoe_density(t, tau);
    const auto [lo, hi] = horseshoe_sandwich(t, tau);
    return {h - lo, hi - h};
  }
  // h = 2c/tau e^z E1(z) with e^z E1(z) ~ sum (-1)^{m-1} (m-1)! / z^m; the
  // leading terms of the bounds cancel exactly, so sum the differences.
  double lower = 0.0, upper = 0.0;
  double fact = 1.0, pow2 = 2.0, zm = 1.0 / z;  // (m-1)!, 2^m, z^{-m}
  for (int m = 1; m <= 20; ++m) {
    const double sign = (m % 2 == 1) ? 1.0 : -1.0;
    lower += sign * (2.0 * fact - pow2 / m) * zm;
    upper += sign * (1.0 / m - fact) * zm;
    fact *= m;
    pow2 *= 2.0;
    zm /= z;
  }
  return {kSandwichConst / tau * lower, 2.0 * kSandwichConst / tau * upper};
}

// Survival function: (2/pi) int_0^{pi/2} Phi-bar(x cot u) du, same splitting.
double horseshoe_tail_mass(double x) {
  if (std::isnan(x) || x < 0.0) throw InvalidParameter("tail_mass needs x >= 0");
  if (x == 0.0) return 0.5;
  if (std::isinf(x)) return 0.0;
  const double scale = std::max(x, 1.0);
  const Breaks b = lambda_breaks(x);
  const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  const double low = panel_sum(b.low, [&](double u) {
    return std::erfc(x / std::tan(u) * inv_sqrt2) * scale;
  });
  const double high = panel_sum(b.high, [&](double w) {
    return std::erfc(x * std::tan(w) * inv_sqrt2) * scale;
  });
  return (low + high) / scale / kPi;
}

}  // namespace hts
