#pragma once

// Experiment configuration: built-in presets for the four studies plus JSON
// files layered on top of a preset (or on the empty "custom" config).

#include <cstdint>
#include <string>
#include <vector>

#include "hts/posterior.hpp"
#include "hts/priors.hpp"
#include "hts/sequence_model.hpp"

namespace hts {

struct PriorConfig {
  std::string label;              // output name; derived when empty
  std::string method = "auto";    // auto | quadrature | metropolis | gibbs | sureshrink
  std::string tail = "cauchy";    // cauchy | student | horseshoe | gaussian
  double df = 3.0;
  std::string scaling = "ot";     // ot | ht | truncated | wavelet-ot | hierarchical
  double nu = 0.5;
  double alpha = 1.0;
  std::string tau = "1";          // number or "1/n"
  std::string truncation = "n";   // number or "n"
  bool fixed_hyper = false;

  bool is_sureshrink() const { return method == "sureshrink"; }
  std::string name() const;
};

struct TruthConfig {
  std::string kind;  // sobolev-cos | sobolev-sine | blocks | bumps | doppler | heavisine | least-favorable
  int level = 2;     // least-favorable only
  double snr = 7.0;
  double target_norm = 20.0;

  std::string name() const;
};

struct ExperimentConfig {
  std::string id = "custom";
  std::string basis = "cosine";  // cosine | sine | wavelet
  std::string filter = "symmlet8";
  int levels = 11;
  int coarse_level = 5;
  std::size_t truncation = 200;
  std::vector<TruthConfig> truths;
  std::vector<PriorConfig> priors;
  std::vector<double> n_grid;
  /// truths[i] is observed only at n_grid[i].
  bool paired = false;
  std::vector<double> p_primes{2.0};
  std::size_t replications = 20;
  std::uint64_t seed = 20240601;
  std::string output_dir = "out";
  unsigned parallel = 1;
  std::size_t draws = 4000;
  std::size_t burn_in = 2000;
  bool contraction = false;
  std::string bands = "first";  // none | first | all
  std::size_t grid = 201;
  double tol = 1e-9;

  /// Throws ConfigError.
  void validate() const;
  BasisDescriptor make_basis() const;
};

const std::vector<std::string>& experiment_ids();
/// Throws ConfigError for an unknown id.
ExperimentConfig preset_config(const std::string& id);
/// Reads a JSON file and layers it over the preset named by its "experiment"
/// field, or over `base` when that field is absent.
ExperimentConfig load_config(const std::string& path, const ExperimentConfig& base);
ExperimentConfig parse_config(const std::string& json_text, const ExperimentConfig& base);

PriorConfig parse_prior(const std::string& json_text);
/// Resolves "1/n" and "n" entries at noise precision n.
PriorSpec resolve_prior(const PriorConfig& cfg, double n);
FitMethod resolve_method(const PriorConfig& cfg, const PriorSpec& spec);
TrueSignal make_truth(const TruthConfig& t, const ExperimentConfig& cfg, double n);

}  // namespace hts
