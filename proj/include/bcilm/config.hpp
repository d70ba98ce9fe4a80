#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bcilm/epidemic.hpp"
#include "bcilm/inference.hpp"
#include "bcilm/model.hpp"
#include "bcilm/population.hpp"
#include "bcilm/prior.hpp"
#include "bcilm/scenarios.hpp"
#include "bcilm/screening.hpp"
#include "bcilm/simulate.hpp"

namespace bcilm {

struct ParameterEntry {
  double value = 0.0;
  bool fixed = false;
  std::optional<Prior> prior;
  std::optional<double> init;
};

/// Model block: spec plus per-parameter values and priors.
struct ModelConfig {
  ModelSpec spec;
  /// Keyed by parameter name; only parameters used by the spec (plus epsilon).
  std::map<std::string, ParameterEntry> parameters;

  ModelParams values() const;
  /// Free parameters in canonical order.
  PriorSpec priors() const;
  /// Initial values for `priors()`: explicit init, else prior median.
  std::vector<double> initial_values() const;
  /// Throws ConfigError for a free parameter without prior and similar.
  void validate() const;
};

struct PopulationSource {
  std::optional<std::filesystem::path> file;
  std::size_t n = 500;
  Interval x_range{100, 300};
  Interval y_range{100, 300};
  std::optional<double> min_distance;
};

struct AnalysisConfig {
  std::size_t n_draws = 100;
  int t_cut = 8;
  int horizon = 21;
  std::size_t waic_max_draws = 1000;
};

struct CompareEntry {
  std::string label;
  std::filesystem::path chain;
  ModelConfig model;
  std::optional<std::size_t> burn_in;
};

struct StudyConfig {
  /// "waic": simulate, fit every model in `fit_models`, compare by WAIC.
  /// "screen": simulate, run spike-and-slab screening per `screen_models`.
  std::string mode = "waic";
  /// Generating scenarios: grid labels ("2A") or "none" for no BC.
  std::vector<std::string> true_models{"1A"};
  Strength strength = Strength::Medium;
  std::vector<std::string> fit_models;
  std::vector<std::string> screen_models{"1A", "2A", "3A"};
  std::size_t replicates = 3;
  /// Parameters of the no-BC arm.
  double baseline_alpha = 2.4;
  double baseline_beta = 2.0;
  /// Initial values for every fit; alarm parameters not listed start at their
  /// prior medians.
  std::map<std::string, double> initial{{"alpha", 1.0}, {"beta", 1.0}};
};

struct RunConfig {
  std::filesystem::path base_dir;
  /// FNV-1a hash of the canonical (key-sorted) config JSON.
  std::string hash;
  std::string canonical;

  std::uint64_t seed = 1;
  std::filesystem::path output = "out";
  std::size_t threads = 1;

  PopulationSource population;
  std::optional<std::filesystem::path> events;
  std::optional<std::filesystem::path> chain;
  /// Observation window for loaded events: [t_min, t_max].
  int data_t_min = 1;
  std::optional<int> data_t_max;

  ModelConfig model;
  PeriodSpec periods;
  SimulationConfig simulation;
  std::size_t replicates = 1;
  MCMCConfig mcmc;
  SpikeSlabConfig screening;
  AnalysisConfig analysis;
  std::vector<CompareEntry> compare;
  StudyConfig study;

  /// Window end used when loading events.
  int events_t_max() const { return data_t_max.value_or(simulation.t_min + simulation.t_max); }
  std::filesystem::path resolve(const std::filesystem::path& p) const;
};

/// Parses a JSON config. Relative paths are resolved against `base_dir`.
RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = ".");
RunConfig load_config(const std::filesystem::path& path);

/// Parses a model block (also used for compare entries).
ModelConfig parse_model(const std::string& json_text, const std::filesystem::path& base_dir = ".");

Prior parse_prior(const std::string& json_text);

}  // namespace bcilm
