#include "hts/quadrature.hpp"

#include <map>
#include <mutex>
#include <numbers>

namespace hts::quad {

namespace {

GaussLegendreRule build_rule(int n) {
  GaussLegendreRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[static_cast<std::size_t>(i)] = -x;
    rule.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
    rule.weights[static_cast<std::size_t>(i)] = w;
    rule.weights[static_cast<std::size_t>(n - 1 - i)] = w;
  }
  return rule;
}

}  // namespace

const GaussLegendreRule& gauss_legendre(int n) {
  if (n < 1) throw InvalidParameter("Gauss-Legendre rule needs at least one node");
  static std::mutex mutex;
  static std::map<int, GaussLegendreRule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, build_rule(n)).first;
  return it->second;
}

double mass_quantile(std::span<const MassPoint> masses, double prob) {
  if (masses.empty()) throw StateError("no mass points");
  double cum = 0.0;
  double prev_cum = 0.0;
  double prev_theta = masses.front().theta;
  for (const MassPoint& m : masses) {
    prev_cum = cum;
    cum += m.mass;
    if (cum >= prob) {
      if (m.mass <= 0.0) return m.theta;
      const double frac = (prob - prev_cum) / m.mass;
      return prev_theta + frac * (m.theta - prev_theta);
    }
    prev_theta = m.theta;
  }
  return masses.back().theta;
}

}  // namespace hts::quad
