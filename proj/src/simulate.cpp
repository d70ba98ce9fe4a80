#include "bcilm/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "bcilm/error.hpp"
#include "bcilm/parallel.hpp"

namespace bcilm {

void SimulationConfig::validate(Framework framework, std::size_t n) const {
  if (t_max < 1) throw ConfigError("simulation needs t_max >= 1");
  periods.validate(framework);
  if (seeds.empty()) {
    if (n_seeds < 1) throw ConfigError("simulation needs at least one initial infection");
    if (n_seeds > n) throw ConfigError("more initial infections than individuals");
  }
  for (std::size_t s : seeds)
    if (s >= n) throw ConfigError("initial infection id " + std::to_string(s) + " out of range");
}

namespace {

/// Mutable simulation state: transitions plus the current time window.
class Simulator {
 public:
  Simulator(const ModelSpec& spec, const Population& pop, const ModelParams& params, const PeriodSpec& periods)
      : spec_(spec), pop_(pop), params_(params), periods_(periods) {
    spec_.validate();
    periods_.validate(spec_.framework);
    if (spec_.susceptibility == SusceptibilityKind::BinaryCovariate) {
      const std::size_t c = pop_.covariate_index(spec_.covariate);
      omega_.resize(pop_.size());
      for (std::size_t i = 0; i < pop_.size(); ++i)
        omega_[i] = params_.alpha0 + params_.alpha1 * pop_[i].covariates[c];
    } else {
      omega_.assign(pop_.size(), params_.alpha);
    }
  }

  void run(std::vector<TransitionTimes>& tr, int t_min, int start, int end, Rng& rng) const {
    if (spec_.alarm && spec_.alarm->signal.kind == SignalKind::External) {
      if (!spec_.alarm->signal.series) throw ConfigError("external alarm signal needs a series");
      const auto gaps = spec_.alarm->signal.series->missing(start - 1, end - 2);
      if (!gaps.empty())
        throw ConfigError("external alarm series does not cover the simulation horizon (first missing time " +
                          std::to_string(gaps.front()) + ")");
    }
    const std::size_t n = pop_.size();
    std::vector<std::size_t> infectious;
    for (int t = start; t < end; ++t) {
      infectious.clear();
      for (std::size_t j = 0; j < n; ++j)
        if (is_infectious(tr[j], t)) infectious.push_back(j);

      double mult = 1.0;
      double exponent = params_.beta;
      if (spec_.alarm) {
        const double signal = signal_at(tr, t_min, t);
        const double keep = alarm_complement(spec_.alarm->family, params_.delta1, params_.delta2, signal);
        if (spec_.form == ModelForm::TypeA) mult = keep;
        if (spec_.form == ModelForm::TypeB) exponent = params_.beta / keep;
      }
      std::vector<std::size_t> newly;
      for (std::size_t i = 0; i < n; ++i) {
        if (event_of(tr[i])) continue;
        double pressure = 0.0;
        const auto row = pop_.distances_from(i);
        for (std::size_t j : infectious) pressure += std::pow(row[j] + spec_.kernel_offset, -exponent);
        const double x = omega_[i] * mult * pressure + params_.epsilon;
        const double p = -std::expm1(-x);
        if (uniform01(rng) < p) newly.push_back(i);
      }
      for (std::size_t i : newly) tr[i] = schedule_transitions(spec_.framework, periods_, i, t);
    }
  }

 private:
  std::optional<int> event_of(const TransitionTimes& t) const {
    return spec_.framework == Framework::SEIR ? t.exposure_time : t.infection_time;
  }

  static bool is_infectious(const TransitionTimes& tr, int t) {
    return tr.infection_time && t > *tr.infection_time && (!tr.removal_time || t <= *tr.removal_time);
  }

  double signal_at(const std::vector<TransitionTimes>& tr, int t_min, int t) const {
    const auto& sig = spec_.alarm->signal;
    if (sig.kind == SignalKind::External) return sig.series->at(t - 1);
    const int s = std::max(t - 1, t_min);
    std::size_t count = 0;
    for (const auto& x : tr) count += is_infectious(x, s) ? 1 : 0;
    if (sig.kind == SignalKind::InternalProportion)
      return static_cast<double>(count) / static_cast<double>(tr.size());
    return static_cast<double>(count);
  }

  const ModelSpec& spec_;
  const Population& pop_;
  const ModelParams& params_;
  const PeriodSpec& periods_;
  std::vector<double> omega_;
};

}  // namespace

EpidemicHistory simulate_epidemic(const ModelSpec& spec, const Population& pop, const ModelParams& params,
                                  const SimulationConfig& config) {
  config.validate(spec.framework, pop.size());
  if (!spec.in_support(params, spec.has_alarm()))
    throw ConfigError("simulation parameters lie outside their admissible region");
  Rng rng(mix_seed(config.rng_seed));
  std::vector<std::size_t> seeds = config.seeds;
  if (seeds.empty()) {
    std::vector<std::size_t> ids(pop.size());
    std::iota(ids.begin(), ids.end(), std::size_t{0});
    for (std::size_t k = 0; k < config.n_seeds; ++k) {
      std::uniform_int_distribution<std::size_t> pick(k, ids.size() - 1);
      std::swap(ids[k], ids[pick(rng)]);
    }
    seeds.assign(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(config.n_seeds));
    std::sort(seeds.begin(), seeds.end());
  }
  std::vector<TransitionTimes> tr(pop.size());
  for (std::size_t s : seeds) tr[s] = schedule_transitions(spec.framework, config.periods, s, config.t_min - 1);
  const int end = config.t_min + config.t_max;
  Simulator sim(spec, pop, params, config.periods);
  sim.run(tr, config.t_min, config.t_min, end, rng);
  return EpidemicHistory(spec.framework, std::move(tr), config.t_min, end);
}

EpidemicHistory continue_epidemic(const ModelSpec& spec, const Population& pop, const ModelParams& params,
                                  const PeriodSpec& periods, const EpidemicHistory& observed, int start, int end,
                                  Rng& rng) {
  if (observed.size() != pop.size())
    throw ValidationError("event history and population sizes differ");
  if (start < observed.t_min() || start > observed.t_max())
    throw RangeError("continuation start " + std::to_string(start) + " outside observed window");
  if (end < start) throw RangeError("continuation end precedes its start");
  std::vector<TransitionTimes> tr = observed.transitions();
  for (std::size_t i = 0; i < tr.size(); ++i) {
    const auto ev = observed.event_time(i);
    if (ev && *ev >= start) tr[i] = TransitionTimes{};
  }
  Simulator sim(spec, pop, params, periods);
  sim.run(tr, observed.t_min(), start, end, rng);
  return EpidemicHistory(spec.framework, std::move(tr), observed.t_min(), end);
}

std::vector<Replicate> simulate_batch(const ModelSpec& spec, const PopulationGenerator& make_population,
                                      const ModelParams& params, const SimulationConfig& config, std::size_t m,
                                      std::size_t threads) {
  std::vector<std::optional<Replicate>> slots(m);
  parallel_for(m, threads, [&](std::size_t k) {
    Population pop = make_population(derive_seed(config.rng_seed, 2 * k));
    SimulationConfig c = config;
    c.rng_seed = derive_seed(config.rng_seed, 2 * k + 1);
    EpidemicHistory h = simulate_epidemic(spec, pop, params, c);
    slots[k] = Replicate{std::move(pop), std::move(h)};
  });
  std::vector<Replicate> out;
  out.reserve(m);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

std::vector<std::size_t> sample_draw_indices(const PosteriorSample& posterior, std::size_t n_draws, Rng& rng) {
  const std::size_t kept = posterior.kept();
  if (kept == 0) throw ValidationError("posterior has no draws after burn-in");
  std::vector<std::size_t> out;
  if (n_draws <= kept) {
    std::vector<std::size_t> ids(kept);
    std::iota(ids.begin(), ids.end(), posterior.burn_in);
    for (std::size_t k = 0; k < n_draws; ++k) {
      std::uniform_int_distribution<std::size_t> pick(k, kept - 1);
      std::swap(ids[k], ids[pick(rng)]);
    }
    out.assign(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(n_draws));
  } else {
    std::uniform_int_distribution<std::size_t> pick(posterior.burn_in, posterior.iterations() - 1);
    for (std::size_t k = 0; k < n_draws; ++k) out.push_back(pick(rng));
  }
  return out;
}

std::vector<EpidemicHistory> resimulate_from_posterior(const ModelSpec& spec, const Population& pop,
                                                       const PeriodSpec& periods, const EpidemicHistory& observed,
                                                       const PosteriorSample& posterior, std::size_t n_draws,
                                                       ResimulationStart start, std::uint64_t rng_seed,
                                                       std::size_t threads) {
  int first = observed.t_min();
  int end = observed.t_max();
  if (start.t_cut) {
    const int t_cut = *start.t_cut;
    if (t_cut < observed.t_min() || t_cut + 1 > observed.t_max())
      throw RangeError("t_cut " + std::to_string(t_cut) + " outside observed window [" +
                       std::to_string(observed.t_min()) + ", " + std::to_string(observed.t_max() - 1) + "]");
    if (start.horizon <= t_cut) throw RangeError("forecast horizon must be after t_cut");
    first = t_cut + 1;
    end = start.horizon + 1;
  }
  Rng pick_rng = make_rng(rng_seed, 0);
  const auto draws = sample_draw_indices(posterior, n_draws, pick_rng);
  std::vector<std::optional<EpidemicHistory>> slots(draws.size());
  parallel_for(draws.size(), threads, [&](std::size_t k) {
    Rng rng = make_rng(rng_seed, k + 1);
    const ModelParams params = posterior.params_at(draws[k]);
    slots[k] = continue_epidemic(spec, pop, params, periods, observed, first, end, rng);
  });
  std::vector<EpidemicHistory> out;
  out.reserve(slots.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace bcilm
