#pragma once

// Brute-force reference computations for the tests. None of these share code
// with the library: fixed grids instead of adaptive panels, closed forms
// through Boost special functions, explicit tensor products.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <vector>

#include <boost/math/special_functions/expint.hpp>

namespace oracle {

inline constexpr double kPi = std::numbers::pi;

/// Unit-scale horseshoe density by the closed form
/// h(t) = (2 pi^3)^{-1/2} e^{z} E1(z), z = t^2 / 2.
inline double horseshoe_density_e1(double t) {
  const double z = 0.5 * t * t;
  double ez_e1;
  if (z < 40.0) {
    ez_e1 = std::exp(z) * boost::math::expint(1, z);
  } else {
    // e^z E1(z) ~ sum (-1)^k k! / z^{k+1}
    double term = 1.0 / z, s = 0.0;
    for (int k = 0; k < 30; ++k) {
      s += term;
      term *= -(k + 1) / z;
    }
    ez_e1 = s;
  }
  return ez_e1 / std::sqrt(2.0 * kPi * kPi * kPi);
}

inline double student_log_density(double x, double df) {
  return std::lgamma(0.5 * (df + 1)) - std::lgamma(0.5 * df) - 0.5 * std::log(df * kPi) -
         0.5 * (df + 1) * std::log1p(x * x / df);
}

/// Gauss-Legendre nodes on [-1, 1] by Newton iteration (independent of the library rule).
struct Rule {
  std::vector<double> x, w;
};

inline Rule gauss_legendre(int n) {
  Rule r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < n; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    r.x[i] = z;
    r.w[i] = 2 / ((1 - z * z) * dp * dp);
  }
  return r;
}

/// Composite Gauss-Legendre: `panels` equal pieces of [a, b].
inline double integrate(const std::function<double(double)>& f, double a, double b, int panels, int order = 10) {
  static const Rule rule10 = gauss_legendre(10);
  const Rule own = order == 10 ? Rule{} : gauss_legendre(order);
  const Rule& r = order == 10 ? rule10 : own;
  const double h = (b - a) / panels;
  double total = 0;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    for (std::size_t i = 0; i < r.x.size(); ++i) total += 0.5 * h * r.w[i] * f(mid + 0.5 * h * r.x[i]);
  }
  return total;
}

/// Survival function of HS(1) as the double integral over (lambda, t):
/// int_0^{pi/2} (2/pi) int_x^inf phi(t / lambda) / lambda dt du, lambda = tan u.
inline double horseshoe_tail_2d(double x) {
  auto inner = [x](double lambda) {
    // t = x + s lambda, s in [0, 40]
    auto g = [&](double s) {
      const double z = x / lambda + s;
      return std::exp(-0.5 * z * z) / std::sqrt(2 * kPi);
    };
    return integrate(g, 0.0, 40.0, 80);
  };
  auto outer = [&](double u) {
    const double lambda = std::tan(u);
    if (lambda <= 0) return 0.0;
    return (2 / kPi) * inner(lambda);
  };
  return integrate(outer, 0.0, 0.5 * kPi, 400);
}

struct Moments {
  double mean;
  double variance;
  double log_mass;
};

/// Posterior moments of exp(-n (x - theta)^2 / 2) h(theta / sigma) / sigma by
/// the trapezoid rule on a fixed merged grid: uniform over the likelihood
/// window x +- 40/sqrt(n) and, where that window reaches zero, 10^4
/// geometric nodes per decade from sigma 1e-10 outward.
inline Moments fixed_grid_posterior(double x, double n, double sigma,
                                    const std::function<double(double)>& log_h, int uniform_nodes = 100000,
                                    int per_decade = 10000) {
  const double L = 40.0 / std::sqrt(n);
  std::vector<double> nodes;
  auto add_side = [&](double sign) {
    const double ax = sign * x;  // observation seen from this side
    const double a = std::max(0.0, ax - L);
    const double b = ax + L;
    if (b <= 0) return;
    for (int i = 0; i <= uniform_nodes; ++i) nodes.push_back(sign * (a + (b - a) * i / uniform_nodes));
    if (a == 0.0) {
      const double lo = sigma * 1e-10;
      if (lo < b) {
        const double decades = std::log10(b / lo);
        const int m = static_cast<int>(std::ceil(decades * per_decade));
        for (int i = 0; i <= m; ++i) nodes.push_back(sign * lo * std::pow(10.0, decades * i / m));
      }
    }
  };
  add_side(+1.0);
  add_side(-1.0);
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  // Drop theta = 0 itself (horseshoe pole); the gap [-sigma 1e-10, sigma 1e-10] is negligible.
  nodes.erase(std::remove(nodes.begin(), nodes.end(), 0.0), nodes.end());

  std::vector<double> lv(nodes.size());
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double t = nodes[i];
    lv[i] = -0.5 * n * (x - t) * (x - t) + log_h(t / sigma) - std::log(sigma);
    top = std::max(top, lv[i]);
  }
  double m0 = 0, m1 = 0, m2 = 0;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    // a gap across zero between the two sides is not integrated
    if (nodes[i] < 0 && nodes[i + 1] > 0 && nodes[i + 1] - nodes[i] > 3 * sigma * 1e-10) continue;
    const double h = nodes[i + 1] - nodes[i];
    const double fa = std::exp(lv[i] - top), fb = std::exp(lv[i + 1] - top);
    m0 += 0.5 * h * (fa + fb);
    m1 += 0.5 * h * (fa * nodes[i] + fb * nodes[i + 1]);
    m2 += 0.5 * h * (fa * nodes[i] * nodes[i] + fb * nodes[i + 1] * nodes[i + 1]);
  }
  const double mean = m1 / m0;
  return {mean, m2 / m0 - mean * mean, top + std::log(m0) + 0.5 * std::log(n / (2 * kPi))};
}

/// log of int prod_i N(x_i; theta_i, 1/n) N(theta_i; 0, s_i^2) dtheta by a
/// tensor Gauss-Legendre grid over the box theta_i in c_i +- 12 w_i.
inline double tensor_log_marginal(const std::vector<double>& x, const std::vector<double>& s, double n,
                                  int per_dim = 48) {
  const std::size_t d = x.size();
  const Rule r = gauss_legendre(per_dim);
  std::vector<double> center(d), half(d);
  for (std::size_t i = 0; i < d; ++i) {
    const double v = s[i] * s[i];
    const double post_var = v / (1 + n * v);
    center[i] = x[i] * n * v / (1 + n * v);
    half[i] = 12 * std::sqrt(post_var);
  }
  std::vector<int> idx(d, 0);
  double total = 0;
  for (;;) {
    double w = 1, logv = 0;
    for (std::size_t i = 0; i < d; ++i) {
      const double t = center[i] + half[i] * r.x[idx[i]];
      w *= half[i] * r.w[idx[i]];
      logv += -0.5 * n * (x[i] - t) * (x[i] - t) + 0.5 * std::log(n / (2 * kPi)) - 0.5 * t * t / (s[i] * s[i]) -
              0.5 * std::log(2 * kPi * s[i] * s[i]);
    }
    total += w * std::exp(logv);
    std::size_t k = 0;
    while (k < d && ++idx[k] == per_dim) idx[k++] = 0;
    if (k == d) break;
  }
  return std::log(total);
}

/// Risk d - 2 #{|x_i| <= t} + sum min(x_i^2, t^2), evaluated directly.
inline double sure_risk(const std::vector<double>& x, double t) {
  double r = static_cast<double>(x.size());
  for (double v : x) {
    if (std::abs(v) <= t) r -= 2;
    r += std::min(v * v, t * t);
  }
  return r;
}

/// min of sure_risk over [0, max|x|] on the candidate values plus a 100-step
/// refinement between consecutive sorted |x_i|.
inline std::pair<double, double> sure_brute_force(const std::vector<double>& x) {
  std::vector<double> a;
  for (double v : x) a.push_back(std::abs(v));
  a.push_back(0.0);
  std::sort(a.begin(), a.end());
  double best_t = 0, best = sure_risk(x, 0.0);
  for (std::size_t i = 0; i + 1 < a.size(); ++i)
    for (int k = 0; k <= 100; ++k) {
      const double t = a[i] + (a[i + 1] - a[i]) * k / 100.0;
      const double r = sure_risk(x, t);
      if (r < best) best = r, best_t = t;
    }
  return {best_t, best};
}

}  // namespace oracle
