#include "bcilm/screening.hpp"

#include <algorithm>
#include <limits>

#include "bcilm/error.hpp"

namespace bcilm {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

bool is_alarm_parameter(const std::string& name) { return name == "delta1" || name == "delta2"; }

void SpikeSlabConfig::validate() const {
  if (iterations < 1000) throw ConfigError("screening needs at least 1000 iterations");
  if (final_iterations < 1000) throw ConfigError("final fit needs at least 1000 iterations");
  if (!(threshold > 0.0 && threshold < 1.0)) throw ConfigError("screening threshold must lie in (0, 1)");
  if (!(warmup_fraction >= 0.0 && warmup_fraction < 1.0)) throw ConfigError("warmup_fraction must lie in [0, 1)");
  if (!(final_burn_in_fraction >= 0.0 && final_burn_in_fraction < 1.0))
    throw ConfigError("final_burn_in_fraction must lie in [0, 1)");
  if (fixed_pi && !(*fixed_pi > 0.0 && *fixed_pi < 1.0)) throw ConfigError("fixed inclusion prior must lie in (0, 1)");
  if (!(pi_a > 0.0 && pi_b > 0.0)) throw ConfigError("inclusion Beta hyperparameters must be positive");
}

ScreeningResult screen(const ModelSpec& spec, const Population& pop, const EpidemicHistory& history,
                       const ModelParams& fixed, const PriorSpec& priors, const SpikeSlabConfig& config) {
  config.validate();
  if (!spec.alarm || spec.form == ModelForm::Baseline) throw ConfigError("screening needs a type A or B model");
  if (spec.alarm->family == AlarmFamily::Hill)
    throw UnsupportedError("spike-and-slab screening does not support the Hill alarm (no exact-zero form)");

  PriorSpec base, slab;
  for (const auto& p : priors) (is_alarm_parameter(p.first) ? slab : base).push_back(p);
  const auto used = spec.parameter_names();
  for (const auto& name : used)
    if (is_alarm_parameter(name) &&
        std::none_of(slab.begin(), slab.end(), [&](const auto& p) { return p.first == name; }))
      throw ConfigError("screening needs a slab prior for " + name);
  if (base.empty()) throw ConfigError("screening needs at least one non-alarm free parameter");
  for (const auto& p : priors)
    if (std::find(used.begin(), used.end(), p.first) == used.end())
      throw ConfigError("parameter '" + p.first + "' is not used by this model");

  LikelihoodEngine engine(spec, pop, history);
  const std::size_t nb = base.size();
  const std::size_t ns = slab.size();

  std::vector<double> theta(nb), delta(ns);
  auto start = [&](const std::pair<std::string, Prior>& p) {
    const auto it = config.initial_values.find(p.first);
    return it != config.initial_values.end() ? it->second : p.second.median();
  };
  for (std::size_t k = 0; k < nb; ++k) theta[k] = start(base[k]);
  for (std::size_t k = 0; k < ns; ++k) delta[k] = start(slab[k]);
  for (const auto& [name, value] : config.initial_values)
    if (std::none_of(priors.begin(), priors.end(), [&](const auto& p) { return p.first == name; }))
      throw ConfigError("initial value given for '" + name + "', which is not a free parameter");
  bool z = config.frozen_indicator.value_or(config.initial_indicator);
  double pi = config.fixed_pi.value_or(0.5);

  ModelParams params = fixed;
  auto loglik = [&](const std::vector<double>& th, const std::vector<double>& d, bool include) {
    for (std::size_t k = 0; k < nb; ++k) params.set(base[k].first, th[k]);
    for (std::size_t k = 0; k < ns; ++k) params.set(slab[k].first, include ? d[k] : 0.0);
    if (!spec.in_support(params, include)) return kNegInf;
    return engine.log_likelihood(params);
  };
  auto base_prior = [&](const std::vector<double>& th) {
    double lp = 0.0;
    for (std::size_t k = 0; k < nb; ++k) lp += base[k].second.log_density(th[k]);
    return lp;
  };

  ComponentwiseRwmh::Target current;
  current.log_likelihood = loglik(theta, delta, z);
  current.log_posterior = base_prior(theta) + current.log_likelihood;
  if (current.log_posterior == kNegInf || std::isnan(current.log_posterior))
    throw InitializationError("log posterior is -inf at the initial values; adjust them or the priors");

  std::vector<double> steps(nb);
  for (std::size_t k = 0; k < nb; ++k) steps[k] = default_step(theta[k]);
  ComponentwiseRwmh sampler(std::move(steps), config.target_acceptance);
  auto evaluate = [&](const std::vector<double>& th) {
    ComponentwiseRwmh::Target out;
    const double lp = base_prior(th);
    if (lp == kNegInf) return out;
    out.log_likelihood = loglik(th, delta, z);
    out.log_posterior = out.log_likelihood == kNegInf ? kNegInf : lp + out.log_likelihood;
    return out;
  };

  const auto warmup = static_cast<std::size_t>(config.warmup_fraction * static_cast<double>(config.iterations));
  ScreeningResult res;
  res.threshold = config.threshold;
  for (const auto& p : base) res.chain.names.push_back(p.first);
  for (const auto& p : slab) res.chain.names.push_back(p.first);
  res.chain.burn_in = warmup;
  res.chain.fixed = fixed;
  std::vector<double> stored_delta(ns);
  std::vector<double> state(nb + ns);

  Rng rng(mix_seed(config.rng_seed));
  std::size_t slab_proposals = 0, slab_accepted = 0;
  for (std::size_t it = 0; it < config.iterations; ++it) {
    if (it == warmup) sampler.reset_counts();
    for (std::size_t k = 0; k < nb; ++k) sampler.update(k, theta, current, evaluate, rng, it < warmup);

    // Independence proposal for the slab values. With z = 0 the likelihood
    // ignores them, so the prior draw is always accepted.
    std::vector<double> proposal(ns);
    for (std::size_t k = 0; k < ns; ++k) proposal[k] = slab[k].second.sample(rng);
    if (!z) {
      delta = proposal;
    } else {
      const double ll = loglik(theta, proposal, true);
      const double log_ratio = ll - current.log_likelihood;
      ++slab_proposals;
      if (ll != kNegInf && (log_ratio >= 0.0 || std::log(uniform01(rng)) < log_ratio)) {
        delta = proposal;
        current.log_likelihood = ll;
        current.log_posterior = base_prior(theta) + ll;
        ++slab_accepted;
      }
    }

    // Metropolized flip of the shared indicator given the current theta and
    // delta*: propose 1 - z and accept with the posterior ratio.
    if (!config.frozen_indicator) {
      const double ll_flip = loglik(theta, delta, !z);
      const double log_prior_odds = std::log(pi) - std::log1p(-pi);  // z = 1 versus z = 0
      const double log_ratio = (ll_flip - current.log_likelihood) + (z ? -log_prior_odds : log_prior_odds);
      if (ll_flip != kNegInf && (log_ratio >= 0.0 || std::log(uniform01(rng)) < log_ratio)) {
        z = !z;
        current.log_likelihood = ll_flip;
        current.log_posterior = base_prior(theta) + ll_flip;
      }
    }
    if (!config.fixed_pi) {
      std::gamma_distribution<double> ga(config.pi_a + (z ? 1.0 : 0.0), 1.0);
      std::gamma_distribution<double> gb(config.pi_b + (z ? 0.0 : 1.0), 1.0);
      const double x = ga(rng);
      const double y = gb(rng);
      pi = x / (x + y);
      pi = std::clamp(pi, std::numeric_limits<double>::min(), 1.0 - std::numeric_limits<double>::epsilon());
    }

    std::copy(theta.begin(), theta.end(), state.begin());
    for (std::size_t k = 0; k < ns; ++k) state[nb + k] = z ? delta[k] : 0.0;
    res.chain.append(state, current.log_posterior, current.log_likelihood);
    res.indicator.push_back(z ? 1 : 0);
    res.pi.push_back(pi);
  }

  for (std::size_t k = 0; k < nb; ++k) {
    res.chain.acceptance_rate.push_back(sampler.acceptance_rate(k));
    res.chain.step_size.push_back(sampler.step(k));
  }
  const double slab_rate =
      slab_proposals == 0 ? 0.0 : static_cast<double>(slab_accepted) / static_cast<double>(slab_proposals);
  for (std::size_t k = 0; k < ns; ++k) {
    res.chain.acceptance_rate.push_back(slab_rate);
    res.chain.step_size.push_back(0.0);
  }

  std::size_t included = 0;
  for (std::size_t it = warmup; it < config.iterations; ++it) included += res.indicator[it];
  res.inclusion_probability = static_cast<double>(included) / static_cast<double>(config.iterations - warmup);
  res.bc_selected = res.inclusion_probability > config.threshold;
  if (!config.frozen_indicator &&
      std::all_of(res.indicator.begin() + static_cast<std::ptrdiff_t>(warmup), res.indicator.end(),
                  [&](std::uint8_t v) { return v == res.indicator.back(); }))
    res.chain.warnings.push_back("indicator stayed at " + std::to_string(res.indicator.back()) +
                                 " after warm-up; inclusion probability reflects the start, not mixing");

  res.medians = fixed;
  for (std::size_t k = 0; k < nb; ++k) {
    std::vector<double> kept;
    for (std::size_t it = warmup; it < config.iterations; ++it) kept.push_back(res.chain.at(it, k));
    res.medians.set(base[k].first, median(kept));
  }
  for (std::size_t k = 0; k < ns; ++k) {
    std::vector<double> on;
    for (std::size_t it = warmup; it < config.iterations; ++it)
      if (res.indicator[it]) on.push_back(res.chain.at(it, nb + k));
    res.medians.set(slab[k].first, on.empty() ? slab[k].second.median() : median(on));
  }
  return res;
}

ScreenThenFitResult screen_then_fit(const ModelSpec& spec, const Population& pop, const EpidemicHistory& history,
                                    const ModelParams& fixed, const PriorSpec& priors,
                                    const SpikeSlabConfig& config) {
  ScreenThenFitResult out;
  out.screening = screen(spec, pop, history, fixed, priors, config);
  out.selected = spec;
  PriorSpec final_priors;
  ModelParams final_fixed = fixed;
  if (out.screening.bc_selected) {
    final_priors = priors;
  } else {
    out.selected.form = ModelForm::Baseline;
    out.selected.alarm.reset();
    final_fixed.delta1 = 0.0;
    final_fixed.delta2 = 0.0;
    for (const auto& p : priors)
      if (!is_alarm_parameter(p.first)) final_priors.push_back(p);
  }
  MCMCConfig mc;
  mc.iterations = config.final_iterations;
  mc.burn_in =
      static_cast<std::size_t>(config.final_burn_in_fraction * static_cast<double>(config.final_iterations));
  mc.target_acceptance = config.target_acceptance;
  mc.rng_seed = derive_seed(config.rng_seed, 1);
  for (const auto& p : final_priors) mc.initial_values.push_back(out.screening.medians.get(p.first));
  out.posterior = fit(out.selected, pop, history, final_fixed, final_priors, mc);
  return out;
}

}  // namespace bcilm
