#include "bcilm/inference.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "bcilm/csv.hpp"
#include "bcilm/error.hpp"

namespace bcilm {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

std::vector<double> PosteriorSample::column(std::size_t param) const {
  std::vector<double> out;
  out.reserve(kept());
  for (std::size_t k = burn_in; k < iterations(); ++k) out.push_back(at(k, param));
  return out;
}

std::optional<std::size_t> PosteriorSample::index_of(const std::string& name) const {
  for (std::size_t k = 0; k < names.size(); ++k)
    if (names[k] == name) return k;
  return std::nullopt;
}

ModelParams PosteriorSample::params_at(std::size_t iteration) const {
  if (iteration >= iterations()) throw RangeError("posterior iteration " + std::to_string(iteration) + " out of range");
  ModelParams p = fixed;
  for (std::size_t k = 0; k < names.size(); ++k) p.set(names[k], at(iteration, k));
  return p;
}

void PosteriorSample::append(const std::vector<double>& state, double log_post, double log_lik) {
  draws.insert(draws.end(), state.begin(), state.end());
  log_posterior.push_back(log_post);
  log_likelihood.push_back(log_lik);
}

void MCMCConfig::validate() const {
  if (iterations < 1) throw ConfigError("mcmc needs at least one iteration");
  if (burn_in >= iterations) throw ConfigError("mcmc burn_in must be smaller than iterations");
  if (!(target_acceptance > 0.0 && target_acceptance < 1.0))
    throw ConfigError("mcmc target_acceptance must lie in (0, 1)");
}

ComponentwiseRwmh::ComponentwiseRwmh(std::vector<double> steps, double target_acceptance)
    : target_(target_acceptance),
      proposals_(steps.size(), 0),
      accepted_(steps.size(), 0),
      adapt_count_(steps.size(), 0) {
  log_step_.reserve(steps.size());
  for (double s : steps) {
    if (!(s > 0.0) || !std::isfinite(s)) throw ConfigError("proposal step sizes must be positive");
    log_step_.push_back(std::log(s));
  }
}

void ComponentwiseRwmh::reset_counts() {
  std::fill(proposals_.begin(), proposals_.end(), 0);
  std::fill(accepted_.begin(), accepted_.end(), 0);
}

double ComponentwiseRwmh::acceptance_rate(std::size_t k) const {
  return proposals_[k] == 0 ? 0.0 : static_cast<double>(accepted_[k]) / static_cast<double>(proposals_[k]);
}

double default_step(double x) {
  const double s = 0.1 * std::abs(x);
  return s > 0.0 && std::isfinite(s) ? s : 0.1;
}

PosteriorSample fit(const ModelSpec& spec, const Population& pop, const EpidemicHistory& history,
                    const ModelParams& fixed, const PriorSpec& priors, const MCMCConfig& config) {
  config.validate();
  if (priors.empty()) throw ConfigError("fit needs at least one free parameter");
  const std::size_t dim = priors.size();
  const auto used = spec.parameter_names();
  for (const auto& [name, prior] : priors) {
    if (name == "epsilon") throw UnsupportedError("fitting epsilon is not supported");
    if (std::find(used.begin(), used.end(), name) == used.end())
      throw ConfigError("parameter '" + name + "' is not used by this model");
  }
  if (!config.initial_values.empty() && config.initial_values.size() != dim)
    throw ConfigError("initial_values needs one value per free parameter");
  if (!config.initial_steps.empty() && config.initial_steps.size() != dim)
    throw ConfigError("initial_steps needs one value per free parameter");

  LikelihoodEngine engine(spec, pop, history);
  ModelParams params = fixed;
  auto evaluate = [&](const std::vector<double>& state) {
    ComponentwiseRwmh::Target out;
    double lp = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
      lp += priors[k].second.log_density(state[k]);
      if (lp == kNegInf) return out;
      params.set(priors[k].first, state[k]);
    }
    if (!spec.in_support(params)) return out;
    const double ll = engine.log_likelihood(params);
    if (ll == kNegInf) return out;
    out.log_likelihood = ll;
    out.log_posterior = lp + ll;
    return out;
  };

  std::vector<double> state(dim);
  for (std::size_t k = 0; k < dim; ++k)
    state[k] = config.initial_values.empty() ? priors[k].second.median() : config.initial_values[k];
  ComponentwiseRwmh::Target current = evaluate(state);
  if (current.log_posterior == kNegInf || std::isnan(current.log_posterior)) {
    std::ostringstream msg;
    msg << "log posterior is -inf at the initial values (";
    for (std::size_t k = 0; k < dim; ++k) msg << (k ? ", " : "") << priors[k].first << "=" << state[k];
    msg << "); adjust the initial values";
    throw InitializationError(msg.str());
  }

  std::vector<double> steps(dim);
  for (std::size_t k = 0; k < dim; ++k)
    steps[k] = config.initial_steps.empty() ? default_step(state[k]) : config.initial_steps[k];
  ComponentwiseRwmh sampler(std::move(steps), config.target_acceptance);

  PosteriorSample out;
  for (const auto& p : priors) out.names.push_back(p.first);
  out.burn_in = config.burn_in;
  out.fixed = fixed;
  out.draws.reserve(config.iterations * dim);
  out.log_posterior.reserve(config.iterations);
  out.log_likelihood.reserve(config.iterations);

  Rng rng(mix_seed(config.rng_seed));
  for (std::size_t it = 0; it < config.iterations; ++it) {
    if (it == config.burn_in) sampler.reset_counts();
    const bool adapting = config.adapt && it < config.burn_in;
    for (std::size_t k = 0; k < dim; ++k) sampler.update(k, state, current, evaluate, rng, adapting);
    out.append(state, current.log_posterior, current.log_likelihood);
  }

  for (std::size_t k = 0; k < dim; ++k) {
    out.acceptance_rate.push_back(sampler.acceptance_rate(k));
    out.step_size.push_back(sampler.step(k));
    const double rate = out.acceptance_rate.back();
    if (rate == 0.0)
      out.warnings.push_back(out.names[k] + ": no proposals accepted after burn-in");
    else if (rate < 0.15 || rate > 0.7)
      out.warnings.push_back(out.names[k] + ": acceptance rate " + csv::format(rate) + " outside [0.15, 0.7]");
    const auto col = out.column(k);
    if (col.size() >= 100) {
      out.geweke.push_back(geweke_diagnostic(col));
      if (out.geweke.back().stuck) out.warnings.push_back(out.names[k] + ": chain did not move (Geweke stuck)");
    } else {
      out.geweke.push_back(GewekeResult{std::numeric_limits<double>::quiet_NaN(), false});
    }
  }
  return out;
}

HpdInterval hpdi(std::span<const double> samples, double mass) {
  if (samples.empty()) throw DomainError("hpdi needs at least one sample");
  if (!(mass > 0.0 && mass < 1.0)) throw DomainError("hpdi mass must lie in (0, 1)");
  std::vector<double> s(samples.begin(), samples.end());
  for (double v : s)
    if (!std::isfinite(v)) throw DomainError("hpdi samples must be finite");
  std::sort(s.begin(), s.end());
  const std::size_t n = s.size();
  // Guard against mass * n landing a hair above an integer.
  std::size_t k = static_cast<std::size_t>(std::ceil(mass * static_cast<double>(n) - 1e-9));
  k = std::clamp<std::size_t>(k, std::min<std::size_t>(2, n), n);
  HpdInterval best{s.front(), s[k - 1]};
  for (std::size_t i = 1; i + k <= n; ++i)
    if (s[i + k - 1] - s[i] < best.width()) best = {s[i], s[i + k - 1]};
  return best;
}

double median(std::span<const double> samples) {
  if (samples.empty()) throw DomainError("median of an empty sample");
  std::vector<double> s(samples.begin(), samples.end());
  const std::size_t n = s.size();
  std::nth_element(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(n / 2), s.end());
  const double hi = s[n / 2];
  if (n % 2 == 1) return hi;
  const double lo = *std::max_element(s.begin(), s.begin() + static_cast<std::ptrdiff_t>(n / 2));
  return lo + (hi - lo) / 2.0;
}

std::vector<ParameterSummary> posterior_summary(const PosteriorSample& sample, double mass) {
  std::vector<ParameterSummary> out;
  for (std::size_t k = 0; k < sample.names.size(); ++k) {
    const auto col = sample.column(k);
    ParameterSummary s;
    s.name = sample.names[k];
    if (!col.empty()) {
      s.median = median(col);
      s.hpd = hpdi(col, mass);
    }
    s.acceptance_rate = k < sample.acceptance_rate.size() ? sample.acceptance_rate[k] : 0.0;
    s.geweke = k < sample.geweke.size() ? sample.geweke[k] : GewekeResult{};
    out.push_back(s);
  }
  return out;
}

std::string summary_csv(const std::vector<ParameterSummary>& summary) {
  std::string out = "parameter,median,hpd_lower,hpd_upper,acceptance_rate,geweke_z,geweke_stuck\n";
  for (const auto& s : summary) {
    out += s.name + "," + csv::format(s.median) + "," + csv::format(s.hpd.lower) + "," + csv::format(s.hpd.upper) +
           "," + csv::format(s.acceptance_rate) + "," + csv::format(s.geweke.z) + "," +
           (s.geweke.stuck ? "1" : "0") + "\n";
  }
  return out;
}

}  // namespace bcilm
