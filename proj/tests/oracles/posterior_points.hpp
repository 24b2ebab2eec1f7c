#pragma once

// Random posterior test set: tail in {Cauchy, Student-3, Horseshoe},
// log10 sigma in [-12, 0], x in [-10, 10], n in {1, 1e3, 1e6}.

#include <cmath>
#include <functional>
#include <vector>

#include "hts/posterior.hpp"
#include "hts/rng.hpp"
#include "oracles/oracles.hpp"

namespace oracle {

struct PosteriorPoint {
  hts::UnivariatePosterior posterior;
  double sigma;
  std::function<double(double)> log_h;  // independent of the library densities
};

inline std::vector<PosteriorPoint> posterior_points(std::size_t count, std::uint64_t seed) {
  std::vector<PosteriorPoint> out;
  const double ns[] = {1.0, 1e3, 1e6};
  for (std::size_t i = 0; i < count; ++i) {
    hts::RandomStream rs(seed, hts::Stream::Test, i);
    const auto family = rs.below(3);
    const double log10_sigma = rs.uniform(-12.0, 0.0);
    const double x = rs.uniform(-10.0, 10.0);
    const double n = ns[rs.below(3)];
    const double sigma = std::pow(10.0, log10_sigma);
    hts::TailFamily tail = hts::TailFamily::cauchy();
    std::function<double(double)> log_h = [](double t) { return -std::log(kPi * (1 + t * t)); };
    if (family == 1) {
      tail = hts::TailFamily::student_t(3.0);
      log_h = [](double t) { return student_log_density(t, 3.0); };
    } else if (family == 2) {
      tail = hts::TailFamily::horseshoe();
      log_h = [](double t) { return std::log(horseshoe_density_e1(t)); };
    }
    out.push_back({hts::UnivariatePosterior{x, n, std::log(sigma), tail}, sigma, log_h});
  }
  return out;
}

}  // namespace oracle
