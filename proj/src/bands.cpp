#include <algorithm>
#include <cmath>
#include <numeric>

#include "hts/error.hpp"
#include "hts/posterior.hpp"

namespace hts {

namespace {

std::size_t retained_count(double level, std::size_t draws) {
  if (!(level > 0.0 && level <= 1.0)) throw InvalidParameter("band level must lie in (0, 1]");
  const auto keep = static_cast<std::size_t>(std::ceil(level * static_cast<double>(draws) - 1e-9));
  return std::clamp<std::size_t>(keep, 1, draws);
}

// Indices of the `keep` smallest distances, ties by index.
std::vector<std::size_t> closest(const std::vector<double>& dist, std::size_t keep) {
  std::vector<std::size_t> order(dist.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return dist[a] < dist[b]; });
  order.resize(keep);
  return order;
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

}  // namespace

double CredibleBand::average_width() const {
  if (lower.empty()) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < lower.size(); ++i) s += upper[i] - lower[i];
  return s / static_cast<double>(lower.size());
}

CredibleBand credible_band(std::span<const std::vector<double>> draw_functions, std::span<const double> center,
                           double level) {
  if (draw_functions.empty()) throw StateError("no draws to build a band from");
  const std::size_t keep = retained_count(level, draw_functions.size());
  std::vector<double> dist(draw_functions.size());
  for (std::size_t d = 0; d < draw_functions.size(); ++d) {
    if (draw_functions[d].size() != center.size()) throw ShapeError("draw and center lengths differ");
    dist[d] = squared_distance(draw_functions[d], center);
  }
  CredibleBand band;
  band.center.assign(center.begin(), center.end());
  band.lower.assign(center.size(), std::numeric_limits<double>::infinity());
  band.upper.assign(center.size(), -std::numeric_limits<double>::infinity());
  band.retained = keep;
  for (std::size_t d : closest(dist, keep)) {
    for (std::size_t i = 0; i < center.size(); ++i) {
      band.lower[i] = std::min(band.lower[i], draw_functions[d][i]);
      band.upper[i] = std::max(band.upper[i], draw_functions[d][i]);
    }
  }
  return band;
}

CredibleBand credible_band(const PosteriorSummary& summary, const BasisDescriptor& basis, std::size_t grid,
                           double level) {
  if (!summary.has_draws()) throw StateError("summary stores no draws");
  const std::size_t D = summary.draw_count;
  const std::size_t keep = retained_count(level, D);

  std::optional<BasisMatrix> matrix;
  if (!basis.is_wavelet()) matrix.emplace(basis, summary.size(), grid);
  else if (grid != basis.frame().size()) throw ShapeError("wavelet band grid must equal the frame length");
  auto synth = [&](std::span<const double> coef) {
    return matrix ? matrix->synthesize(coef) : basis.frame().synthesize(coef);
  };

  const std::vector<double> center = synth(summary.mean);
  // two passes keep memory at one function per draw in flight
  std::vector<double> dist(D);
  for (std::size_t d = 0; d < D; ++d) dist[d] = squared_distance(synth(summary.draw(d)), center);

  CredibleBand band;
  band.center = center;
  band.lower.assign(center.size(), std::numeric_limits<double>::infinity());
  band.upper.assign(center.size(), -std::numeric_limits<double>::infinity());
  band.retained = keep;
  for (std::size_t d : closest(dist, keep)) {
    const auto f = synth(summary.draw(d));
    for (std::size_t i = 0; i < center.size(); ++i) {
      band.lower[i] = std::min(band.lower[i], f[i]);
      band.upper[i] = std::max(band.upper[i], f[i]);
    }
  }
  return band;
}

}  // namespace hts
