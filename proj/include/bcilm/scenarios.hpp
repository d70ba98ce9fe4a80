#pragma once

#include <string>

#include "bcilm/model.hpp"
#include "bcilm/prior.hpp"

namespace bcilm {

enum class Strength { Weak, Medium, Strong };

std::string to_string(Strength s);
Strength strength_from_string(const std::string& s);

struct Scenario {
  std::string label;  ///< grid label, e.g. "2A"
  ModelSpec spec;
  ModelParams params;
};

/// Alarm family of grid model 1 (threshold) .. 4 (Hill).
AlarmFamily grid_family(int model);

/// Model spec for a grid label: "Base", or "<1-4><A|B>". Models 1-3 use the
/// infectious count as signal, model 4 the infectious proportion.
ModelSpec grid_spec(const std::string& label);
std::string grid_label(const ModelSpec& spec);

/// Simulation-study settings (alpha, beta, delta1, delta2) for one grid model
/// and BC strength.
Scenario grid_scenario(const std::string& label, Strength strength);

/// Spatial baseline without behavioural change.
Scenario baseline_scenario(double alpha, double beta);

/// Uniform(0, 100) on alpha and beta plus the alarm parameter priors of the
/// simulation study.
PriorSpec default_priors(const ModelSpec& spec);

}  // namespace bcilm
