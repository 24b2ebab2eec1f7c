#include <cmath>
#include <set>
#include <vector>

#include "doctest.h"
#include "hts/rng.hpp"

using namespace hts;

TEST_CASE("philox known answer") {
  const PhiloxCounter out = philox4x32({0, 0, 0, 0}, {0, 0});
  CHECK(out[0] == 0x6627e8d5u);
  CHECK(out[1] == 0xe169c58du);
  CHECK(out[2] == 0xbc57ac4cu);
  CHECK(out[3] == 0x9b00dbd8u);

  const PhiloxCounter ones = philox4x32({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu});
  CHECK(ones[0] == 0x408f276du);
  CHECK(ones[1] == 0x41c83b0eu);
  CHECK(ones[2] == 0xa20bc7c6u);
  CHECK(ones[3] == 0x6d5451fdu);
}

TEST_CASE("streams are pure functions of their keys") {
  RandomStream a(42, Stream::Noise, 7), b(42, Stream::Noise, 7);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u32() == b.next_u32());

  RandomStream c(42, Stream::Noise, 8), d(42, Stream::Prior, 7), e(43, Stream::Noise, 7);
  RandomStream ref(42, Stream::Noise, 7);
  const auto r = ref.next_u32();
  CHECK(c.next_u32() != r);
  CHECK(d.next_u32() != r);
  CHECK(e.next_u32() != r);

  CHECK(keyed_normal(5, Stream::Noise, 3) == keyed_normal(5, Stream::Noise, 3));
  CHECK(derive_seed(1, 2) == derive_seed(1, 2));
  CHECK(derive_seed(1, 2) != derive_seed(1, 3));
}

TEST_CASE("uniform and normal moments") {
  RandomStream rs(2024, Stream::Test, 0);
  const int N = 200000;
  double su = 0, su2 = 0, sn = 0, sn2 = 0, sn4 = 0;
  double umin = 1, umax = 0;
  for (int i = 0; i < N; ++i) {
    const double u = rs.uniform();
    umin = std::min(umin, u);
    umax = std::max(umax, u);
    su += u;
    su2 += u * u;
    const double z = rs.normal();
    sn += z;
    sn2 += z * z;
    sn4 += z * z * z * z;
  }
  CHECK(umin > 0.0);
  CHECK(umax < 1.0);
  CHECK(std::abs(su / N - 0.5) < 4 * std::sqrt(1.0 / 12 / N));
  CHECK(std::abs(su2 / N - 1.0 / 3) < 4 * std::sqrt(4.0 / 45 / N));
  CHECK(std::abs(sn / N) < 4 / std::sqrt(N));
  CHECK(std::abs(sn2 / N - 1) < 4 * std::sqrt(2.0 / N));
  CHECK(std::abs(sn4 / N - 3) < 4 * std::sqrt(96.0 / N));
}

TEST_CASE("below is uniform on its range") {
  RandomStream rs(9, Stream::Test, 1);
  std::vector<int> counts(7, 0);
  const int N = 70000;
  for (int i = 0; i < N; ++i) {
    const auto v = rs.below(7);
    REQUIRE(v < 7);
    ++counts[v];
  }
  double chi2 = 0;
  for (int c : counts) chi2 += (c - N / 7.0) * (c - N / 7.0) / (N / 7.0);
  CHECK(chi2 < 22.5);  // chi-square(6) 0.999 quantile
}

TEST_CASE("cauchy and exponential draws") {
  RandomStream rs(11, Stream::Test, 2);
  const int N = 100000;
  int inside = 0;
  double se = 0;
  for (int i = 0; i < N; ++i) {
    if (std::abs(rs.cauchy()) < 1) ++inside;
    se += rs.exponential(2.0);
  }
  CHECK(std::abs(inside / double(N) - 0.5) < 4 * std::sqrt(0.25 / N));
  CHECK(std::abs(se / N - 0.5) < 4 * 0.5 / std::sqrt(N));
}

TEST_CASE("keyed normals are uncorrelated across indices") {
  const int R = 10000;
  double sxy = 0, sx2 = 0, sy2 = 0;
  for (int r = 0; r < R; ++r) {
    const double a = keyed_normal(derive_seed(77, r), Stream::Noise, 3);
    const double b = keyed_normal(derive_seed(77, r), Stream::Noise, 4);
    sxy += a * b;
    sx2 += a * a;
    sy2 += b * b;
  }
  const double corr = sxy / std::sqrt(sx2 * sy2);
  CHECK(std::abs(corr) < 4 / std::sqrt(R));
}
