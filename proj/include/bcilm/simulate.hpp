#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "bcilm/epidemic.hpp"
#include "bcilm/model.hpp"
#include "bcilm/population.hpp"
#include "bcilm/posterior.hpp"
#include "bcilm/rng.hpp"

namespace bcilm {

struct SimulationConfig {
  /// Number of transition steps. The resulting history covers the time points
  /// t_min .. t_min + t_max (t_max + 1 points) and its epidemic curve has
  /// t_max entries.
  int t_max = 30;
  int t_min = 1;
  std::size_t n_seeds = 3;
  /// Explicit initial infections; drawn at random when empty.
  std::vector<std::size_t> seeds;
  std::uint64_t rng_seed = 1;
  PeriodSpec periods;

  void validate(Framework framework, std::size_t n) const;
};

/// Forward simulation. Initial infections start their infectious (SIR) or
/// exposed (SEIR) period at t_min; at every later step each susceptible is
/// infected independently with probability P(i, t).
EpidemicHistory simulate_epidemic(const ModelSpec& spec, const Population& pop, const ModelParams& params,
                                  const SimulationConfig& config);

/// Keeps every event of `observed` that happened before `start`, resets later
/// ones and simulates events at start .. end - 1. The result covers
/// [observed.t_min(), end].
EpidemicHistory continue_epidemic(const ModelSpec& spec, const Population& pop, const ModelParams& params,
                                  const PeriodSpec& periods, const EpidemicHistory& observed, int start, int end,
                                  Rng& rng);

struct Replicate {
  Population population;
  EpidemicHistory history;
};

using PopulationGenerator = std::function<Population(std::uint64_t seed)>;

/// m independent population + epidemic pairs. Replicate k uses seeds derived
/// from (config.rng_seed, k), so results do not depend on `threads`.
std::vector<Replicate> simulate_batch(const ModelSpec& spec, const PopulationGenerator& make_population,
                                      const ModelParams& params, const SimulationConfig& config, std::size_t m,
                                      std::size_t threads = 1);

/// Full-epidemic (posterior predictive) or truncated (forecast) resimulation.
struct ResimulationStart {
  /// nullopt: resimulate the whole window from the initial infections.
  std::optional<int> t_cut;
  /// Last event time simulated in forecast mode.
  int horizon = 0;

  static ResimulationStart full() { return {}; }
  static ResimulationStart truncated_at(int t_cut, int horizon) { return {t_cut, horizon}; }
};

/// Indices of `n_draws` posterior draws chosen uniformly from the post burn-in
/// iterations (without replacement when enough are available).
std::vector<std::size_t> sample_draw_indices(const PosteriorSample& posterior, std::size_t n_draws, Rng& rng);

std::vector<EpidemicHistory> resimulate_from_posterior(const ModelSpec& spec, const Population& pop,
                                                       const PeriodSpec& periods, const EpidemicHistory& observed,
                                                       const PosteriorSample& posterior, std::size_t n_draws,
                                                       ResimulationStart start, std::uint64_t rng_seed,
                                                       std::size_t threads = 1);

}  // namespace bcilm
