#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "hts/error.hpp"
#include "hts/layout.hpp"
#include "hts/metrics.hpp"
#include "hts/rng.hpp"
#include "hts/signals.hpp"

using namespace hts;

namespace {

const double kInf = std::numeric_limits<double>::infinity();
const std::vector<double> kPrimes = {1, 2, 3, 4, 6, kInf};

PosteriorSummary with_draws(const std::vector<std::vector<double>>& draws) {
  PosteriorSummary s;
  const std::size_t N = draws.front().size(), D = draws.size();
  s.mean.assign(N, 0.0);
  s.draw_count = D;
  s.draws.resize(N * D);
  for (std::size_t d = 0; d < D; ++d)
    for (std::size_t c = 0; c < N; ++c) {
      s.draws[c * D + d] = draws[d][c];
      s.mean[c] += draws[d][c] / D;
    }
  return s;
}

}  // namespace

TEST_CASE("grid norms") {
  const std::vector<double> v = {1, -2, 2, 0};
  CHECK(grid_norm(v, 1) == doctest::Approx(1.25));
  CHECK(grid_norm(v, 2) == doctest::Approx(1.5));
  CHECK(grid_norm(v, 3) == doctest::Approx(std::cbrt(17.0 / 4)));
  CHECK(grid_norm(v, kInf) == 2.0);
  CHECK(grid_norm(std::vector<double>(5, 0.0), 4) == 0.0);
  // no overflow for huge values
  CHECK(grid_norm(std::vector<double>{1e300, 1e300}, 6) == doctest::Approx(1e300));
  CHECK_THROWS_AS(grid_norm(v, 0.5), InvalidParameter);
}

TEST_CASE("lp errors") {
  const auto cos = truth_sobolev_cos(200);
  const WaveletFrame frame(Filter::make(FilterKind::Symmlet8), 11, 5);
  const auto bumps = truth_dj_quartet(DjSignal::Bumps, frame);
  for (const auto* t : {&cos, &bumps}) {
    CAPTURE(t->basis.name());
    const ErrorEvaluator eval(t->basis, t->coefficients.size());
    for (double e : eval.lp_errors(t->coefficients, t->coefficients, kPrimes)) CHECK(e == 0.0);
    const std::vector<double> zero(t->coefficients.size(), 0.0);
    double ss = 0;
    for (double v : t->coefficients) ss += v * v;
    const double expect = t->basis.is_wavelet() ? std::sqrt(ss / 2048) : std::sqrt(ss);
    CHECK(eval.lp_error(zero, t->coefficients, 2) == doctest::Approx(expect).epsilon(1e-14));
    // the p' = 2 shortcut agrees with the grid norm of the synthesized function
    const auto values = eval.function_values(t->coefficients);
    CHECK(grid_norm(values, 2) == doctest::Approx(expect).epsilon(t->basis.is_wavelet() ? 1e-12 : 0.02));
    const auto all = eval.lp_errors(zero, t->coefficients, kPrimes);
    for (std::size_t i = 0; i < kPrimes.size(); ++i) {
      CHECK(all[i] == eval.lp_error(zero, t->coefficients, kPrimes[i]));
      if (i > 0 && kPrimes[i] != 2) CHECK(all[i] >= all[i - 1] * (1 - 1e-12));
    }
    CHECK(lp_error(zero, t->coefficients, 4, t->basis) == all[3]);
  }
  CHECK_THROWS_AS(lp_error(std::vector<double>(3), std::vector<double>(4), 2, BasisDescriptor::cosine()), ShapeError);
  CHECK_THROWS_AS(ErrorEvaluator(BasisDescriptor::wavelet(frame), 100), ShapeError);
}

TEST_CASE("L4 grid norms track the coefficient surrogate across levels") {
  const int J = 11;
  const WaveletFrame frame(Filter::make(FilterKind::Symmlet8), J, 5);
  const ErrorEvaluator eval(BasisDescriptor::wavelet(frame), 2048);
  const std::vector<double> zero(2048, 0.0);
  std::vector<double> ratio;
  for (int j = 5; j < J; ++j) {
    std::vector<double> c(2048, 0.0);
    RandomStream rs(17, Stream::Test, j);
    for (std::size_t k = 0; k < level_size(j); ++k) c[level_begin(j) + k] = rs.normal();
    const double surrogate = std::exp2(j * 0.25) * level_norm(c, j, 4.0) / std::sqrt(2048.0);
    ratio.push_back(eval.lp_error(c, zero, 4) / surrogate);
  }
  std::sort(ratio.begin(), ratio.end());
  const double mid = ratio[ratio.size() / 2];
  MESSAGE("ratio range " << ratio.front() << " .. " << ratio.back());
  for (double r : ratio) CHECK(std::abs(r / mid - 1) <= 0.05);
}

TEST_CASE("contraction errors") {
  const auto truth = truth_sobolev_cos(30);
  const ErrorEvaluator eval(truth.basis, 30);
  const auto exact = with_draws(std::vector<std::vector<double>>(20, truth.coefficients));
  for (double e : contraction_errors(exact, truth.coefficients, kPrimes, eval)) CHECK(e == 0.0);

  auto shifted = truth.coefficients;
  shifted[4] += 0.3;
  const auto off = with_draws(std::vector<std::vector<double>>(7, shifted));
  CHECK(contraction_error(off, truth.coefficients, 2, eval) == doctest::Approx(0.3).epsilon(1e-14));
  // p' = inf: 0.3 times the grid max of |phi_5|, which is sqrt 2 at t = 0
  CHECK(contraction_error(off, truth.coefficients, kInf, eval) == doctest::Approx(0.3 * std::sqrt(2.0)).epsilon(1e-12));

  std::vector<std::vector<double>> draws;
  RandomStream rs(3, Stream::Test, 0);
  for (int d = 0; d < 50; ++d) {
    auto v = truth.coefficients;
    for (auto& x : v) x += 0.1 * rs.normal();
    draws.push_back(v);
  }
  const auto s = with_draws(draws);
  CHECK(contraction_error(s, truth.coefficients, 2, eval) >= eval.lp_error(s.mean, truth.coefficients, 2));
  CHECK_THROWS_AS(contraction_error(PosteriorSummary{}, truth.coefficients, 2, eval), StateError);
}

TEST_CASE("slope fits") {
  const std::vector<double> n = {1e3, 1e4, 1e5};
  std::vector<double> e;
  for (double x : n) e.push_back(2.5 * std::pow(x, -1.0 / 3));
  const auto f = slope_fit(n, e);
  CHECK(std::abs(f.slope + 1.0 / 3) < 1e-12);
  CHECK(std::abs(f.intercept - std::log(2.5)) < 1e-11);
  CHECK(f.residual < 1e-12);
  CHECK(std::abs(slope_fit(n, std::vector<double>(3, 0.7)).slope) < 1e-15);
  CHECK_THROWS_AS(slope_fit(std::vector<double>{10, 10}, std::vector<double>{1, 2}), InvalidParameter);
  CHECK_THROWS_AS(slope_fit(n, std::vector<double>{1, 2}), ShapeError);
  CHECK_THROWS_AS(slope_fit(n, std::vector<double>{1, 0, 2}), InvalidParameter);
}

TEST_CASE("replication statistics") {
  const auto s = replication_stats(std::vector<double>{1, 2, 3, 4});
  CHECK(s.mean == 2.5);
  CHECK(s.sd == doctest::Approx(std::sqrt(5.0 / 3)));
  CHECK(s.se == doctest::Approx(std::sqrt(5.0 / 3) / 2));
  CHECK(s.count == 4);
  CHECK(replication_stats(std::vector<double>{7}).se == 0.0);
  CHECK_THROWS_AS(replication_stats(std::vector<double>{}), InvalidParameter);

  // s.e. scales as R^{-1/2}: quadrupling R halves it
  RandomStream rs(6, Stream::Test, 0);
  std::vector<double> v(16000);
  for (auto& x : v) x = 1 + 2 * rs.normal();
  const double se1 = replication_stats(std::span(v).first(4000)).se;
  const double se2 = replication_stats(std::span(v).first(8000)).se;
  const double se4 = replication_stats(v).se;
  CHECK(se1 / se4 == doctest::Approx(2.0).epsilon(0.05));
  CHECK(se1 / se2 == doctest::Approx(std::sqrt(2.0)).epsilon(0.05));
}
