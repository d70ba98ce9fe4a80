#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bcilm/inference.hpp"

namespace bcilm {

struct SpikeSlabConfig {
  std::size_t iterations = 25000;
  std::size_t final_iterations = 75000;
  /// Fraction of screening iterations dropped before estimating inclusion.
  double warmup_fraction = 0.2;
  /// Burn-in fraction of the final fit.
  double final_burn_in_fraction = 0.1;
  /// BC-ILM is selected when the inclusion probability exceeds this.
  double threshold = 0.5;
  /// Fixed inclusion prior probability; Beta(pi_a, pi_b) hyperprior when unset.
  std::optional<double> fixed_pi;
  double pi_a = 5.0;
  double pi_b = 5.0;
  /// Holds the indicator at this value (diagnostic use).
  std::optional<bool> frozen_indicator;
  /// Indicator value at the first iteration. Starting from Baseline keeps
  /// alpha near its no-BC fit until the first flip is accepted.
  bool initial_indicator = false;
  /// Starting values by parameter name; prior (slab) medians otherwise.
  std::map<std::string, double> initial_values;
  double target_acceptance = 0.44;
  std::uint64_t rng_seed = 1;

  void validate() const;
};

struct ScreeningResult {
  /// Stored alarm parameters are z * delta*; row k is the state after iteration k + 1.
  PosteriorSample chain;
  std::vector<std::uint8_t> indicator;
  std::vector<double> pi;
  double inclusion_probability = 0.0;
  bool bc_selected = false;
  /// Post warm-up medians: alpha/beta over every kept iteration, alarm parameters
  /// over z = 1 iterations (slab medians when z never reached 1).
  ModelParams medians;
  double threshold = 0.5;
};

/// Kuo-Mallick spike-and-slab screening of a type A/B model. `priors` holds
/// the standard priors of the non-alarm parameters and the slab priors of the
/// alarm parameters. One shared indicator gates all alarm parameters.
ScreeningResult screen(const ModelSpec& spec, const Population& pop, const EpidemicHistory& history,
                       const ModelParams& fixed, const PriorSpec& priors, const SpikeSlabConfig& config);

struct ScreenThenFitResult {
  ScreeningResult screening;
  ModelSpec selected;
  PosteriorSample posterior;
};

/// Screens, then fits the selected model class (alarm priors reused as
/// standard priors) starting from the screening medians.
ScreenThenFitResult screen_then_fit(const ModelSpec& spec, const Population& pop, const EpidemicHistory& history,
                                    const ModelParams& fixed, const PriorSpec& priors,
                                    const SpikeSlabConfig& config);

/// Whether `name` is an alarm parameter (delta1, delta2).
bool is_alarm_parameter(const std::string& name);

}  // namespace bcilm
