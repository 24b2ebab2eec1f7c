#pragma once

// Adaptive Gauss-Kronrod integration of exp(log_f(u)) and its first two
// theta-moments. Panels keep their own log scale and are combined by
// log-sum-exp, so integrands far below the double range are handled.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "hts/error.hpp"

namespace hts::quad {

struct GaussLegendreRule {
  std::vector<double> nodes;    // on [-1, 1], ascending
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule by Newton iteration on P_n (cached per n).
const GaussLegendreRule& gauss_legendre(int n);

/// Integrates f over [a, b] with a composite rule of `panels` equal pieces.
template <class F>
double composite_gauss_legendre(F&& f, double a, double b, int panels, const GaussLegendreRule& rule) {
  const double width = (b - a) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * width;
    const double mid = lo + 0.5 * width;
    double s = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * f(mid + 0.5 * width * rule.nodes[i]);
    total += 0.5 * width * s;
  }
  return total;
}

// 15-point Kronrod extension of the 7-point Gauss rule.
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for Kronrod nodes 1, 3, 5, 7.
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

/// One evaluation of the integrand: the moment variable and the log integrand
/// (Jacobian included).
struct LogNode {
  double theta;
  double log_value;
};

struct AdaptiveOptions {
  double rtol = 1e-10;
  // Absolute floor on the error of the mean.
  double atol = 1e-14;
  int max_panels = 6000;
};

struct MassPoint {
  double theta;
  double mass;
};

struct LogMomentResult {
  double log_mass = -std::numeric_limits<double>::infinity();
  double mean = 0.0;
  double variance = 0.0;
  double mean_error = 0.0;      // absolute
  double mass_rel_error = 0.0;  // relative error of exp(log_mass)
  int panels = 0;
  std::vector<MassPoint> masses;  // node masses in theta order, normalized to 1
};

namespace detail {

struct Panel {
  double a;
  double b;
  double scale;  // max log value over the nodes
  double m0, m1, e0, e1;
  std::array<double, 15> theta;
  std::array<double, 15> logv;
};

template <class F>
Panel evaluate_panel(F& f, double a, double b) {
  Panel p{};
  p.a = a;
  p.b = b;
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  // layout: index 0..6 -> -x_0..-x_6, 7 -> center, 8..14 -> +x_6..+x_0
  for (int i = 0; i < 7; ++i) {
    const LogNode lo = f(center - half * kKronrodNodes[i]);
    const LogNode hi = f(center + half * kKronrodNodes[i]);
    p.theta[i] = lo.theta;
    p.logv[i] = lo.log_value;
    p.theta[14 - i] = hi.theta;
    p.logv[14 - i] = hi.log_value;
  }
  const LogNode mid = f(center);
  p.theta[7] = mid.theta;
  p.logv[7] = mid.log_value;

  double scale = -std::numeric_limits<double>::infinity();
  for (double l : p.logv) {
    if (std::isnan(l)) throw InvalidInput("integrand evaluated to NaN");
    scale = std::max(scale, l);
  }
  p.scale = scale;
  if (!std::isfinite(scale)) {
    if (scale > 0) throw InvalidInput("integrand overflowed to +inf");
    p.m0 = p.m1 = p.e0 = p.e1 = 0.0;
    return p;
  }
  double k0 = 0.0, k1 = 0.0, g0 = 0.0, g1 = 0.0;
  auto accumulate = [&](int idx, double wk, double wg) {
    const double v = std::exp(p.logv[idx] - scale);
    k0 += wk * v;
    k1 += wk * v * p.theta[idx];
    g0 += wg * v;
    g1 += wg * v * p.theta[idx];
  };
  for (int i = 0; i < 7; ++i) {
    const double wg = (i % 2 == 1) ? kGaussWeights[i / 2] : 0.0;
    accumulate(i, kKronrodWeights[i], wg);
    accumulate(14 - i, kKronrodWeights[i], wg);
  }
  accumulate(7, kKronrodWeights[7], kGaussWeights[3]);
  p.m0 = half * k0;
  p.m1 = half * k1;
  p.e0 = std::abs(half * (k0 - g0));
  p.e1 = std::abs(half * (k1 - g1));
  return p;
}

inline double kronrod_weight(int idx) { return kKronrodWeights[idx <= 7 ? idx : 14 - idx]; }

}  // namespace detail

/// Integrates exp(log_value(u)) and theta(u)-moments over [breaks.front(),
/// breaks.back()], starting from one panel per break interval. Throws
/// ConvergenceError when the tolerance is not met within max_panels.
template <class F>
LogMomentResult integrate_log_moments(F&& f, std::span<const double> breaks, const AdaptiveOptions& opt) {
  using detail::Panel;
  std::vector<double> cuts(breaks.begin(), breaks.end());
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  if (cuts.size() < 2) throw InvalidParameter("integration domain needs at least two break points");

  std::vector<Panel> panels;
  panels.reserve(static_cast<std::size_t>(std::max<int>(opt.max_panels, static_cast<int>(cuts.size()))) + 2);
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) panels.push_back(detail::evaluate_panel(f, cuts[i], cuts[i + 1]));

  double global = 0.0, m0 = 0.0, m1 = 0.0, e0 = 0.0, e1 = 0.0, mean = 0.0, mean_err = 0.0;
  auto totals = [&]() {
    global = -std::numeric_limits<double>::infinity();
    for (const Panel& p : panels) global = std::max(global, p.scale);
    m0 = m1 = e0 = e1 = 0.0;
    if (!std::isfinite(global)) return;
    for (const Panel& p : panels) {
      if (!std::isfinite(p.scale)) continue;
      const double w = std::exp(p.scale - global);
      m0 += w * p.m0;
      m1 += w * p.m1;
      e0 += w * p.e0;
      e1 += w * p.e1;
    }
    mean = m1 / m0;
    mean_err = (e1 + std::abs(mean) * e0) / m0;
  };

  for (;;) {
    totals();
    if (!std::isfinite(global) || !(m0 > 0.0)) throw InvalidInput("integrand vanishes on the whole domain");
    const double mean_target = opt.rtol * std::abs(mean) + opt.atol;
    const bool converged = mean_err <= mean_target && e0 <= opt.rtol * m0;
    if (converged) break;
    if (static_cast<int>(panels.size()) >= opt.max_panels) {
      throw ConvergenceError("posterior quadrature did not reach tolerance (mean error " +
                                 std::to_string(mean_err) + ")",
                             std::max(mean_err / std::max(std::abs(mean), 1e-300), e0 / m0), opt.rtol);
    }
    std::size_t worst = 0;
    double worst_score = -1.0;
    for (std::size_t i = 0; i < panels.size(); ++i) {
      const Panel& p = panels[i];
      if (!std::isfinite(p.scale)) continue;
      const double w = std::exp(p.scale - global);
      const double score = w * ((p.e1 + std::abs(mean) * p.e0) / mean_target + p.e0 / opt.rtol);
      if (score > worst_score) {
        worst_score = score;
        worst = i;
      }
    }
    const double a = panels[worst].a;
    const double b = panels[worst].b;
    const double mid = 0.5 * (a + b);
    if (!(mid > a && mid < b)) {
      throw ConvergenceError("posterior quadrature panel below floating-point resolution",
                             mean_err / std::max(std::abs(mean), 1e-300), opt.rtol);
    }
    panels[worst] = detail::evaluate_panel(f, a, mid);
    panels.push_back(detail::evaluate_panel(f, mid, b));
  }

  std::sort(panels.begin(), panels.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });

  LogMomentResult out;
  out.log_mass = global + std::log(m0);
  out.mean = mean;
  out.mean_error = mean_err;
  out.mass_rel_error = e0 / m0;
  out.panels = static_cast<int>(panels.size());
  out.masses.reserve(panels.size() * 15);
  double central = 0.0;
  for (const Panel& p : panels) {
    if (!std::isfinite(p.scale)) continue;
    const double half = 0.5 * (p.b - p.a);
    const double w = std::exp(p.scale - global) * half / m0;
    for (int i = 0; i < 15; ++i) {
      const double mass = w * detail::kronrod_weight(i) * std::exp(p.logv[i] - p.scale);
      const double dev = p.theta[i] - mean;
      central += mass * dev * dev;
      out.masses.push_back({p.theta[i], mass});
    }
  }
  out.variance = central;
  return out;
}

/// Quantile of the discrete node masses, linearly interpolated between nodes.
double mass_quantile(std::span<const MassPoint> masses, double prob);

}  // namespace hts::quad
