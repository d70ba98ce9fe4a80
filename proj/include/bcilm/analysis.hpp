#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bcilm/epidemic.hpp"
#include "bcilm/model.hpp"
#include "bcilm/population.hpp"
#include "bcilm/posterior.hpp"

namespace bcilm {

/// Per-time 95% HPDI and median of simulated incidence.
struct CurveBand {
  std::vector<int> t;
  std::vector<double> lower;
  std::vector<double> median;
  std::vector<double> upper;
  std::size_t n_draws = 0;

  std::size_t size() const { return t.size(); }
  /// Fraction of times whose observed count lies inside [lower, upper].
  double coverage(const std::vector<int>& observed) const;
};

/// Band from simulated curves (rows = draws, all the same length). The median
/// is the lower middle order statistic so it is always an observed count.
CurveBand curve_band(const std::vector<std::vector<int>>& curves, int t_first, double mass = 0.95);

/// Posterior predictive band of the epidemic curve over [t_min, t_max - 1].
CurveBand ppd_curve(const ModelSpec& spec, const Population& pop, const PeriodSpec& periods,
                    const EpidemicHistory& history, const PosteriorSample& posterior, std::size_t n_draws = 100,
                    std::uint64_t rng_seed = 1, std::size_t threads = 1);

/// Forecast band over t_cut + 1 .. horizon, continuing each simulation from
/// the observed state at t_cut.
CurveBand forecast_curve(const ModelSpec& spec, const Population& pop, const PeriodSpec& periods,
                         const EpidemicHistory& history, const PosteriorSample& posterior, int t_cut, int horizon,
                         std::size_t n_draws = 100, std::uint64_t rng_seed = 1, std::size_t threads = 1);

struct WaicEntry {
  std::string model;
  double lppd = 0.0;
  double p_waic = 0.0;
  double waic = 0.0;
  std::size_t n_draws = 0;
  std::size_t n_points = 0;
};

/// WAIC with one pointwise term per susceptible individual per time step.
/// Uses at most `max_draws` post burn-in draws, evenly thinned.
WaicEntry waic(const ModelSpec& spec, const Population& pop, const EpidemicHistory& history,
               const PosteriorSample& posterior, std::string label = "", std::size_t max_draws = 1000,
               std::size_t threads = 1);

/// WAIC from a draws x points matrix of log terms.
WaicEntry waic_from_terms(const std::vector<std::vector<double>>& terms, std::string label = "");

struct WaicReport {
  std::vector<WaicEntry> entries;
  std::size_t best = 0;
  std::string pointwise_unit = "susceptible individual x time step";

  /// waic[i] - waic[j].
  double delta(std::size_t i, std::size_t j) const { return entries[i].waic - entries[j].waic; }
  std::string to_csv() const;
};

WaicReport compare_models(std::vector<WaicEntry> entries);

/// Column order of the model grid tables: Base, 1A, 1B, 2A, 2B, 3A, 3B, 4A, 4B.
const std::vector<std::string>& model_grid_labels();

}  // namespace bcilm
