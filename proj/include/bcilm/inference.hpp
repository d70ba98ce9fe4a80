#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "bcilm/epidemic.hpp"
#include "bcilm/model.hpp"
#include "bcilm/population.hpp"
#include "bcilm/posterior.hpp"
#include "bcilm/prior.hpp"
#include "bcilm/rng.hpp"

namespace bcilm {

struct MCMCConfig {
  std::size_t iterations = 100000;
  std::size_t burn_in = 10000;
  /// One value per free parameter, in PriorSpec order. Prior medians when empty.
  std::vector<double> initial_values;
  /// Initial proposal standard deviations; 10% of |initial value| when empty.
  std::vector<double> initial_steps;
  /// Component-wise acceptance rate the step sizes are tuned towards.
  double target_acceptance = 0.44;
  /// Tune step sizes during burn-in; they are frozen afterwards either way.
  bool adapt = true;
  std::uint64_t rng_seed = 1;

  void validate() const;
};

/// Component-wise Gaussian random-walk Metropolis with Robbins-Monro tuning of
/// the log step size of each component.
class ComponentwiseRwmh {
 public:
  struct Target {
    double log_posterior = -INFINITY;
    double log_likelihood = -INFINITY;
  };

  ComponentwiseRwmh(std::vector<double> steps, double target_acceptance);

  /// Proposes a new value for component k. `evaluate(state)` returns the
  /// target at a proposed state, or a -inf log posterior to reject it.
  /// `adapting` enables the step-size update for this call.
  template <typename Evaluate>
  bool update(std::size_t k, std::vector<double>& state, Target& current, Evaluate&& evaluate, Rng& rng,
              bool adapting) {
    const double old = state[k];
    state[k] = old + std::exp(log_step_[k]) * normal_(rng);
    const Target proposed = evaluate(state);
    const double log_ratio = proposed.log_posterior - current.log_posterior;
    bool accept = false;
    double accept_prob = 0.0;
    if (proposed.log_posterior != -INFINITY && !std::isnan(log_ratio)) {
      accept_prob = log_ratio >= 0.0 ? 1.0 : std::exp(log_ratio);
      accept = log_ratio >= 0.0 || std::log(uniform01(rng)) < log_ratio;
    }
    if (accept) {
      current = proposed;
    } else {
      state[k] = old;
    }
    ++proposals_[k];
    accepted_[k] += accept ? 1 : 0;
    if (adapting) {
      ++adapt_count_[k];
      log_step_[k] += (accept_prob - target_) / std::pow(static_cast<double>(adapt_count_[k]) + 1.0, 0.6);
    }
    return accept;
  }

  void reset_counts();
  double acceptance_rate(std::size_t k) const;
  double step(std::size_t k) const { return std::exp(log_step_[k]); }

 private:
  std::vector<double> log_step_;
  double target_;
  std::vector<std::size_t> proposals_;
  std::vector<std::size_t> accepted_;
  std::vector<std::size_t> adapt_count_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Default proposal sd for a component starting at x.
double default_step(double x);

/// Posterior sampling of the free parameters listed in `priors`; all other
/// parameters are taken from `fixed`. Throws InitializationError when the
/// initial state has zero posterior density.
PosteriorSample fit(const ModelSpec& spec, const Population& pop, const EpidemicHistory& history,
                    const ModelParams& fixed, const PriorSpec& priors, const MCMCConfig& config);

struct HpdInterval {
  double lower = 0.0;
  double upper = 0.0;
  double width() const { return upper - lower; }
  bool contains(double x) const { return x >= lower && x <= upper; }
};

/// Shortest interval spanning ceil(mass * n) sorted samples.
HpdInterval hpdi(std::span<const double> samples, double mass = 0.95);

double median(std::span<const double> samples);

/// Spectral density at frequency zero from an AR fit with AIC order selection.
double spectrum0(std::span<const double> x);

/// Geweke z-score comparing the means of the first and last fractions of a
/// chain.
GewekeResult geweke_diagnostic(std::span<const double> chain, double first_frac = 0.1, double last_frac = 0.5);

struct ParameterSummary {
  std::string name;
  double median = 0.0;
  HpdInterval hpd;
  double acceptance_rate = 0.0;
  GewekeResult geweke;
};

std::vector<ParameterSummary> posterior_summary(const PosteriorSample& sample, double mass = 0.95);
std::string summary_csv(const std::vector<ParameterSummary>& summary);

}  // namespace bcilm
