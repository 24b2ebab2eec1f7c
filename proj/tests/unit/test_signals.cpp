#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <vector>

#include "doctest.h"
#include "hts/error.hpp"
#include "hts/layout.hpp"
#include "hts/signals.hpp"
#include "hts/spaces.hpp"

using namespace hts;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

double sample_rms(const std::vector<double>& x) {
  double s = 0;
  for (double v : x) s += v * v;
  return std::sqrt(s / x.size());
}

// ||f||_{2K} / ||f||_K for f_k = k^-e sin(w k), long double partial sums
double partial_ratio(double beta, double e, double w, int K) {
  long double a = 0, b = 0;
  for (int k = 1; k <= 2 * K; ++k) {
    const long double v = std::pow((long double)k, 2 * beta - 2 * e) * std::pow(std::sin(w * (long double)k), 2);
    (k <= K ? a : b) += v;
  }
  return (double)std::sqrt((a + b) / a);
}

}  // namespace

TEST_CASE("Sobolev truths") {
  const auto cos = truth_sobolev_cos(200);
  CHECK(cos.coefficients.size() == 200);
  CHECK(cos.coefficients[0] == doctest::Approx(0.8414709848).epsilon(1e-10));
  CHECK(cos.basis.kind() == BasisKind::CosineHalfShift);
  for (std::size_t c = 0; c < 200; ++c) CHECK(std::abs(cos.coefficients[c]) <= std::pow(c + 1.0, -1.5));
  const double n100 = sobolev_norm(std::span(cos.coefficients).first(100), 0.9);
  CHECK(sobolev_norm(cos.coefficients, 0.9) / n100 - 1 == doctest::Approx(partial_ratio(0.9, 1.5, 1, 100) - 1).epsilon(1e-10));
  CHECK(sobolev_norm(cos.coefficients, 0.9) / n100 - 1 < 0.05);
  CHECK(partial_ratio(0.9, 1.5, 1, 200) < partial_ratio(0.9, 1.5, 1, 100));
  CHECK(partial_ratio(0.6, 1.5, 1, 100) - 1 < 0.01);

  const auto sine = truth_sobolev_sine(200);
  CHECK(sine.coefficients[0] == doctest::Approx(-0.5440211109).epsilon(1e-10));
  CHECK(sine.basis.kind() == BasisKind::Sine);
  for (std::size_t c = 0; c < 200; ++c) CHECK(std::abs(sine.coefficients[c]) <= std::pow(c + 1.0, -2.25));
  const double s100 = sobolev_norm(std::span(sine.coefficients).first(100), 1.6);
  CHECK(sobolev_norm(sine.coefficients, 1.6) / s100 - 1 == doctest::Approx(partial_ratio(1.6, 2.25, 10, 100) - 1).epsilon(1e-10));
  CHECK(sobolev_norm(sine.coefficients, 1.6) / s100 - 1 < 0.05);
  CHECK(partial_ratio(1.6, 2.25, 10, 200) < partial_ratio(1.6, 2.25, 10, 100));
  CHECK(partial_ratio(0.8, 2.25, 10, 100) - 1 < 0.01);
  REQUIRE(sine.declared_class.has_value());
  CHECK(std::get<SobolevClass>(*sine.declared_class).beta == 1.75);
  CHECK_NOTHROW(sine.validate());
  CHECK_THROWS_AS(truth_sobolev_cos(0), InvalidParameter);
}

TEST_CASE("Donoho-Johnstone quartet at SNR 7") {
  const WaveletFrame frame(Filter::make(FilterKind::Symmlet8), 11, 5);
  for (auto which : {DjSignal::Blocks, DjSignal::Bumps, DjSignal::Doppler, DjSignal::HeaviSine}) {
    CAPTURE(dj_signal_name(which));
    CHECK(dj_signal_from_name(dj_signal_name(which)) == which);
    const auto t = truth_dj_quartet(which, frame);
    CHECK(t.coefficients.size() == 2048);
    const auto samples = frame.synthesize(t.coefficients);
    CHECK(std::abs(sample_rms(samples) - 7.0) < 1e-9);
    // noise s.d. 1/sqrt(n) = 1/2
    const auto t4 = truth_dj_quartet(which, frame, 7.0, 4.0);
    CHECK(std::abs(sample_rms(frame.synthesize(t4.coefficients)) * 2.0 - 7.0) < 1e-9);
    const auto back = frame.analyze(samples);
    for (std::size_t i = 0; i < 2048; ++i) CHECK(std::abs(back[i] - t.coefficients[i]) < 1e-10);
  }
  CHECK_THROWS_AS(dj_signal_from_name("chirp"), InvalidParameter);
  CHECK_THROWS_AS(truth_dj_quartet(DjSignal::Bumps, frame, 0.0), InvalidParameter);
  CHECK(dj_function(DjSignal::HeaviSine, 0.1) ==
        doctest::Approx(4 * std::sin(0.4 * std::numbers::pi) + 1 - 1));
  CHECK(dj_function(DjSignal::Doppler, 0.0) == 0.0);
}

TEST_CASE("Blocks is sparse in the Haar basis") {
  const int J = 11;
  const WaveletFrame haar(Filter::make(FilterKind::Haar), J, 5);
  const auto t = truth_dj_quartet(DjSignal::Blocks, haar);
  // count jumps on the sample grid directly
  std::size_t jumps = 0;
  for (std::size_t i = 1; i < 2048; ++i)
    if (dj_function(DjSignal::Blocks, (i + 1) / 2048.0) != dj_function(DjSignal::Blocks, i / 2048.0)) ++jumps;
  // 11 jump positions; 0.25 falls on the grid and takes a half step first
  CHECK(jumps == 12);
  std::size_t nonzero = 0;
  for (std::size_t i = 32; i < 2048; ++i)
    if (std::abs(t.coefficients[i]) > 1e-9) ++nonzero;
  CHECK(nonzero <= jumps * J);
  CHECK(nonzero > 0);
}

TEST_CASE("HeaviSine coefficients decay away from its singularities") {
  const int J = 11;
  const WaveletFrame frame(Filter::make(FilterKind::Symmlet8), J, 5);
  const auto t = truth_dj_quartet(DjSignal::HeaviSine, frame);
  std::vector<double> weighted;
  for (int j = 6; j < J; ++j) {
    const double width = 16.0 * std::exp2(-j);  // support length of a 16-tap wavelet
    double m = 0;
    for (std::size_t k = 0; k < level_size(j); ++k) {
      const double at = k * std::exp2(-j);
      bool near = false;
      for (double s : {0.3, 0.72}) {
        const double d = std::abs(at - s);
        if (std::min(d, 1 - d) < width) near = true;
      }
      if (!near) m = std::max(m, std::abs(t.coefficients[level_begin(j) + k]));
    }
    weighted.push_back(std::exp2(j / 2.0) * m);
  }
  CHECK(weighted[0] > 0);
  // geometric decay until the round-off floor
  for (std::size_t i = 1; i < 4; ++i) CHECK(weighted[i] < 0.1 * weighted[i - 1]);
  CHECK(weighted[4] < 1e-11);
  // the singular positions keep large coefficients at every level
  for (int j = 6; j < J; ++j) CHECK(level_norm(t.coefficients, j, kInf) > 1.0);
}

TEST_CASE("stick-breaking weights") {
  for (std::size_t count : {1u, 4u, 16u, 256u}) {
    const auto w = stick_breaking_weights(count, 11, count);
    CHECK(w.size() == count);
    double s = 0;
    for (double x : w) {
      CHECK(x >= 0.0);
      s += x;
    }
    CHECK(s == 1.0);
    CHECK(std::accumulate(w.rbegin(), w.rend(), 0.0) == 1.0);
    CHECK(stick_breaking_weights(count, 11, count) == w);
  }
  // the permutation moves the big first sticks around
  std::set<std::size_t> argmax;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto w = stick_breaking_weights(16, seed, 4);
    argmax.insert(std::max_element(w.begin(), w.end()) - w.begin());
  }
  CHECK(argmax.size() > 4);
  CHECK_THROWS_AS(stick_breaking_weights(0, 1, 1), InvalidParameter);
}

TEST_CASE("least-favorable truths") {
  const WaveletFrame frame(Filter::make(FilterKind::Symmlet8), 11, 2);
  for (int i = 1; i <= 4; ++i) {
    const int j = 2 * i;
    CAPTURE(j);
    const auto t = truth_least_favorable({j, 20.0, 123}, frame);
    CHECK(besov_norm(t.coefficients, 1.5, 1.0, kInf) == doctest::Approx(20.0).epsilon(1e-13));
    double mass = 0;
    int pos = 0, neg = 0;
    for (std::size_t c = 0; c < t.coefficients.size(); ++c) {
      const double v = t.coefficients[c];
      if (c < level_begin(j) || c >= level_begin(j + 1)) {
        CHECK(v == 0.0);
      } else {
        mass += std::abs(v);
        pos += v > 0;
        neg += v < 0;
      }
    }
    CHECK(mass == doctest::Approx(20.0 * std::exp2(-j)).epsilon(1e-14));
    if (j >= 6) {
      CHECK(pos > 0);
      CHECK(neg > 0);
    }
    CHECK(truth_least_favorable({j, 20.0, 123}, frame).coefficients == t.coefficients);
    CHECK(truth_least_favorable({j, 20.0, 124}, frame).coefficients != t.coefficients);
    CHECK_NOTHROW(t.validate());
    const auto back = frame.analyze(frame.synthesize(t.coefficients));
    for (std::size_t c = 0; c < back.size(); ++c) CHECK(std::abs(back[c] - t.coefficients[c]) < 1e-10);
  }
  CHECK_THROWS_AS(truth_least_favorable({11, 20.0, 1}, frame), InvalidParameter);
  CHECK_THROWS_AS(truth_least_favorable({1, 20.0, 1}, frame), InvalidParameter);
}
