#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "bcilm/model.hpp"

namespace bcilm {

/// Geweke diagnostic for one parameter.
struct GewekeResult {
  double z = 0.0;
  /// Chain did not move in one of the windows; z is meaningless.
  bool stuck = false;
};

/// Stored MCMC output. Row k of `draws` is the state after iteration k + 1.
struct PosteriorSample {
  std::vector<std::string> names;
  std::vector<double> draws;  ///< row-major, iterations x names.size()
  std::vector<double> log_posterior;
  std::vector<double> log_likelihood;
  std::vector<double> acceptance_rate;  ///< per parameter, post burn-in
  std::vector<double> step_size;        ///< per parameter, final proposal sd
  std::size_t burn_in = 0;
  /// Values of every model parameter not sampled.
  ModelParams fixed;
  std::vector<GewekeResult> geweke;
  std::vector<std::string> warnings;

  std::size_t iterations() const { return names.empty() ? 0 : draws.size() / names.size(); }
  std::size_t kept() const { return iterations() > burn_in ? iterations() - burn_in : 0; }
  double at(std::size_t iteration, std::size_t param) const { return draws[iteration * names.size() + param]; }
  /// Post burn-in values of one parameter.
  std::vector<double> column(std::size_t param) const;
  std::optional<std::size_t> index_of(const std::string& name) const;
  /// Full parameter set at a stored iteration.
  ModelParams params_at(std::size_t iteration) const;
  void append(const std::vector<double>& state, double log_post, double log_lik);
};

}  // namespace bcilm
