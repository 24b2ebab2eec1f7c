#include <cmath>
#include <vector>

#include "doctest.h"
#include "hts/quadrature.hpp"

using namespace hts;

TEST_CASE("gauss-legendre integrates polynomials exactly") {
  for (int n : {1, 2, 5, 10, 12, 20}) {
    const auto& r = quad::gauss_legendre(n);
    REQUIRE(r.nodes.size() == static_cast<std::size_t>(n));
    for (int deg = 0; deg <= 2 * n - 1; ++deg) {
      double s = 0;
      for (int i = 0; i < n; ++i) s += r.weights[i] * std::pow(r.nodes[i], deg);
      const double exact = deg % 2 ? 0.0 : 2.0 / (deg + 1);
      CHECK(std::abs(s - exact) < 1e-13);
    }
  }
}

TEST_CASE("composite rule") {
  const auto& r = quad::gauss_legendre(10);
  const double v = quad::composite_gauss_legendre([](double x) { return std::exp(x); }, 0.0, 3.0, 4, r);
  CHECK(v == doctest::Approx(std::exp(3.0) - 1).epsilon(1e-14));
}

TEST_CASE("log-moment integration of a shifted gaussian far below the double range") {
  // exp(-2000 - (u - 1.5)^2 / (2 * 0.09)) on [-10, 10] with theta = u
  auto f = [](double u) { return quad::LogNode{u, -2000.0 - (u - 1.5) * (u - 1.5) / 0.18}; };
  const std::vector<double> breaks{-10.0, 0.0, 10.0};
  quad::AdaptiveOptions opt;
  const auto r = quad::integrate_log_moments(f, breaks, opt);
  CHECK(r.mean == doctest::Approx(1.5).epsilon(1e-11));
  CHECK(r.variance == doctest::Approx(0.09).epsilon(1e-9));
  CHECK(r.log_mass == doctest::Approx(-2000.0 + 0.5 * std::log(2 * M_PI * 0.09)).epsilon(1e-12));
  double total = 0;
  for (const auto& m : r.masses) total += m.mass;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  const double med = quad::mass_quantile(r.masses, 0.5);
  CHECK(std::abs(med - 1.5) < 2e-2);
}

TEST_CASE("convergence failure is typed and carries the achieved error") {
  auto f = [](double u) { return quad::LogNode{u, -1e6 * (u - 0.123456) * (u - 0.123456)}; };
  const std::vector<double> breaks{-1.0, 1.0};
  quad::AdaptiveOptions opt;
  opt.max_panels = 3;
  opt.rtol = 1e-14;
  try {
    quad::integrate_log_moments(f, breaks, opt);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(e.requested() == 1e-14);
    CHECK(e.achieved() > e.requested());
  }
}

TEST_CASE("degenerate domains are rejected") {
  auto f = [](double u) { return quad::LogNode{u, 0.0}; };
  const std::vector<double> one{1.0};
  CHECK_THROWS_AS(quad::integrate_log_moments(f, one, {}), InvalidParameter);
  auto nan = [](double u) { return quad::LogNode{u, std::nan("")}; };
  const std::vector<double> two{0.0, 1.0};
  CHECK_THROWS_AS(quad::integrate_log_moments(nan, two, {}), InvalidInput);
}
