#pragma once

// Replicated simulation studies: simulate, fit or threshold, score, average,
// and write the CSV tables, credible bands and SVG plots.

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "hts/config.hpp"
#include "hts/metrics.hpp"

namespace hts {

struct ErrorRecord {
  std::string experiment;
  std::string signal;
  std::string prior;
  double n = 0.0;
  double p_prime = 2.0;
  std::string error_type;  // mean-estimate | contraction
  double value = 0.0;      // replication mean
  double se = 0.0;
  std::size_t replications = 0;
};

struct SlopeRecord {
  std::string experiment;
  std::string signal;
  std::string prior;
  double p_prime = 2.0;
  std::string error_type;
  SlopeFit fit{};
  std::size_t points = 0;
};

struct BandWidthRecord {
  std::string signal;
  std::string prior;
  double n = 0.0;
  double width = 0.0;  // replication mean of the grid-averaged width
  double se = 0.0;
  std::size_t replications = 0;
};

struct ExperimentResult {
  std::vector<ErrorRecord> errors;
  std::vector<SlopeRecord> slopes;
  std::vector<BandWidthRecord> band_widths;
  std::vector<std::string> files;
};

using ProgressFn = std::function<void(const std::string&)>;

/// Deterministic given the config: replication r uses noise seed
/// derive_seed(seed, r) at every n, so aggregates do not depend on `parallel`.
ExperimentResult run_experiment(const ExperimentConfig& cfg, bool write_files = true, const ProgressFn& progress = {});

/// Least-squares log-log slopes per (signal, prior, p', error type) across n.
std::vector<SlopeRecord> fit_slopes(const std::vector<ErrorRecord>& errors);

void write_errors_csv(std::ostream& out, const std::vector<ErrorRecord>& errors);
std::vector<ErrorRecord> read_errors_csv(std::istream& in);
void write_slopes_csv(std::ostream& out, const std::vector<SlopeRecord>& slopes);
void write_band_widths_csv(std::ostream& out, const std::vector<BandWidthRecord>& widths);

/// log error against log n per prior, one chart per (signal, error type, p').
std::vector<std::pair<std::string, std::string>> error_plots(const std::vector<ErrorRecord>& errors);

}  // namespace hts
