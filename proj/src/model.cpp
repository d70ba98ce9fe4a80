#include "bcilm/model.hpp"

#include <cmath>
#include <limits>

#include "bcilm/error.hpp"

namespace bcilm {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

std::string to_string(ModelForm f) {
  switch (f) {
    case ModelForm::Baseline: return "baseline";
    case ModelForm::TypeA: return "A";
    case ModelForm::TypeB: return "B";
  }
  return "?";
}

ModelForm model_form_from_string(const std::string& s) {
  if (s == "baseline" || s == "base" || s == "Base") return ModelForm::Baseline;
  if (s == "A" || s == "a" || s == "typeA") return ModelForm::TypeA;
  if (s == "B" || s == "b" || s == "typeB") return ModelForm::TypeB;
  throw ConfigError("unknown model form '" + s + "' (expected baseline, A or B)");
}

double ModelParams::get(std::string_view name) const {
  if (name == "alpha") return alpha;
  if (name == "alpha0") return alpha0;
  if (name == "alpha1") return alpha1;
  if (name == "beta") return beta;
  if (name == "delta1") return delta1;
  if (name == "delta2") return delta2;
  if (name == "epsilon") return epsilon;
  throw ConfigError("unknown parameter '" + std::string(name) + "'");
}

void ModelParams::set(std::string_view name, double value) {
  if (name == "alpha") alpha = value;
  else if (name == "alpha0") alpha0 = value;
  else if (name == "alpha1") alpha1 = value;
  else if (name == "beta") beta = value;
  else if (name == "delta1") delta1 = value;
  else if (name == "delta2") delta2 = value;
  else if (name == "epsilon") epsilon = value;
  else throw ConfigError("unknown parameter '" + std::string(name) + "'");
}

const std::vector<std::string>& all_parameter_names() {
  static const std::vector<std::string> names{"alpha", "alpha0", "alpha1", "beta", "delta1", "delta2", "epsilon"};
  return names;
}

void ModelSpec::validate() const {
  if (form == ModelForm::Baseline && alarm) throw ConfigError("baseline model must not have an alarm");
  if (form != ModelForm::Baseline && !alarm) throw ConfigError("model type A/B needs an alarm");
  if (alarm && alarm->family == AlarmFamily::Hill) {
    const auto& sig = alarm->signal;
    const bool proportion = sig.kind == SignalKind::InternalProportion ||
                            (sig.kind == SignalKind::External && sig.external_is_proportion);
    if (!proportion) throw ConfigError("Hill alarm requires a proportion-valued signal");
  }
  if (alarm && alarm->signal.kind == SignalKind::External && !alarm->signal.series)
    throw ConfigError("external alarm signal needs a series");
  if (!(kernel_offset >= 0.0)) throw ConfigError("kernel offset must be non-negative");
}

std::vector<std::string> ModelSpec::parameter_names() const {
  std::vector<std::string> names;
  if (susceptibility == SusceptibilityKind::Constant) {
    names.push_back("alpha");
  } else {
    names.push_back("alpha0");
    names.push_back("alpha1");
  }
  names.push_back("beta");
  if (alarm) {
    names.push_back("delta1");
    if (has_delta2(alarm->family)) names.push_back("delta2");
  }
  return names;
}

bool ModelSpec::in_support(const ModelParams& p, bool check_alarm) const {
  if (susceptibility == SusceptibilityKind::Constant) {
    if (!(p.alpha > 0.0)) return false;
  } else if (!(p.alpha0 > 0.0 && p.alpha1 > 0.0)) {
    return false;
  }
  if (!(p.beta > 0.0) || !(p.epsilon >= 0.0)) return false;
  if (check_alarm && alarm && !alarm_parameters_admissible(alarm->family, p.delta1, p.delta2)) return false;
  return std::isfinite(p.alpha) && std::isfinite(p.alpha0) && std::isfinite(p.alpha1) && std::isfinite(p.beta);
}

double log_infection(double x) {
  if (x > 0.6931471805599453) return std::log1p(-std::exp(-x));
  return std::log(-std::expm1(-x));
}

namespace {

double susceptibility_of(const ModelSpec& spec, const ModelParams& p, double z) {
  return spec.susceptibility == SusceptibilityKind::Constant ? p.alpha : p.alpha0 + p.alpha1 * z;
}

std::vector<double> binary_covariate(const ModelSpec& spec, const Population& pop) {
  std::vector<double> z(pop.size(), 0.0);
  if (spec.susceptibility != SusceptibilityKind::BinaryCovariate) return z;
  const std::size_t c = pop.covariate_index(spec.covariate);
  for (std::size_t i = 0; i < pop.size(); ++i) {
    z[i] = pop[i].covariates[c];
    if (z[i] != 0.0 && z[i] != 1.0)
      throw ValidationError("individual " + std::to_string(i) + ": covariate '" + spec.covariate +
                            "' must be 0 or 1");
  }
  return z;
}

}  // namespace

double infection_probability(const ModelSpec& spec, const Population& pop, const EpidemicHistory& history,
                             const ModelParams& params, std::size_t i, int t) {
  spec.validate();
  if (history.state_of(i, t) != Compartment::S)
    throw ValidationError("individual " + std::to_string(i) + " is not susceptible at time " + std::to_string(t));
  double mult = 1.0;
  double exponent = params.beta;
  if (spec.alarm) {
    const double signal = alarm_signal_at(spec.alarm->signal, history, t);
    const double keep = 1.0 - alarm_value(spec.alarm->family, params.delta1, params.delta2, signal);
    if (!(keep > 0.0)) throw DomainError("alarm value reached 1");
    if (spec.form == ModelForm::TypeA) mult = keep;
    if (spec.form == ModelForm::TypeB) exponent = params.beta / keep;
  }
  double pressure = 0.0;
  for (std::size_t j = 0; j < history.size(); ++j) {
    if (j == i || !history.infectious_at(j, t)) continue;
    pressure += std::pow(pop.distance(i, j) + spec.kernel_offset, -exponent);
  }
  const double z = spec.susceptibility == SusceptibilityKind::BinaryCovariate
                       ? pop[i].covariates[pop.covariate_index(spec.covariate)]
                       : 0.0;
  const double x = susceptibility_of(spec, params, z) * mult * pressure + params.epsilon;
  return -std::expm1(-x);
}

LikelihoodEngine::LikelihoodEngine(const ModelSpec& spec, const Population& pop, const EpidemicHistory& history)
    : spec_(spec), n_(pop.size()) {
  spec_.validate();
  if (history.size() != pop.size())
    throw ValidationError("event history covers " + std::to_string(history.size()) +
                          " individuals but the population has " + std::to_string(pop.size()));
  if (history.framework() != spec_.framework)
    throw ValidationError("event history framework " + to_string(history.framework()) +
                          " does not match model framework " + to_string(spec_.framework));
  z_ = binary_covariate(spec_, pop);

  std::vector<double> signal;
  if (spec_.alarm) {
    signal = alarm_signal_series(spec_.alarm->signal, history);
    if (spec_.alarm->family == AlarmFamily::Hill)
      for (double s : signal)
        if (s > 1.0) throw DomainError("Hill alarm signal exceeds 1; a proportion is required");
  }

  for (int t = history.t_min(); t < history.t_max(); ++t) {
    Step step;
    step.t = t;
    for (std::size_t i = 0; i < n_; ++i) {
      const auto ev = history.event_time(i);
      if (!ev || *ev >= t) {
        step.at_risk.push_back(static_cast<std::uint32_t>(i));
        step.infected.push_back(ev && *ev == t ? 1 : 0);
      }
      if (history.infectious_at(i, t)) step.infectious.push_back(static_cast<std::uint32_t>(i));
    }
    if (spec_.alarm) step.signal = signal[static_cast<std::size_t>(t - history.t_min())];
    step.log_dist.reserve(step.at_risk.size() * step.infectious.size());
    for (std::uint32_t i : step.at_risk) {
      const auto row = pop.distances_from(i);
      for (std::uint32_t j : step.infectious) step.log_dist.push_back(std::log(row[j] + spec_.kernel_offset));
    }
    for (auto& p : step.pressure) p.assign(step.at_risk.size(), 0.0);
    term_count_ += step.at_risk.size();
    steps_.push_back(std::move(step));
  }
}

double LikelihoodEngine::complement(const ModelParams& params, double signal) const {
  if (!spec_.alarm) return 1.0;
  return alarm_complement(spec_.alarm->family, params.delta1, params.delta2, signal);
}

const std::vector<double>& LikelihoodEngine::pressure_for(Step& step, double exponent) {
  for (std::uint8_t k = 0; k < 2; ++k) {
    if (step.cached_exponent[k] == exponent) {
      step.last_used = k;
      return step.pressure[k];
    }
  }
  const std::uint8_t slot = step.last_used ^ 1;
  std::vector<double>& out = step.pressure[slot];
  const std::size_t m = step.infectious.size();
  const double* block = step.log_dist.data();
  if (std::isfinite(exponent)) {
    for (std::size_t k = 0; k < step.at_risk.size(); ++k) {
      const double* row = block + k * m;
      double sum = 0.0;
      for (std::size_t q = 0; q < m; ++q) sum += std::exp(-exponent * row[q]);
      out[k] = sum;
    }
  } else {
    // Infinite decay: only pairs at kernel distance exactly 1 (log 0) keep weight.
    for (std::size_t k = 0; k < step.at_risk.size(); ++k) {
      const double* row = block + k * m;
      double sum = 0.0;
      for (std::size_t q = 0; q < m; ++q) {
        const double l = row[q];
        sum += l > 0.0 ? 0.0 : (l == 0.0 ? 1.0 : std::numeric_limits<double>::infinity());
      }
      out[k] = sum;
    }
  }
  step.cached_exponent[slot] = exponent;
  step.last_used = slot;
  return out;
}

template <typename Sink>
void LikelihoodEngine::evaluate(const ModelParams& params, Sink&& sink) {
  const bool constant = spec_.susceptibility == SusceptibilityKind::Constant;
  for (Step& step : steps_) {
    const double keep = complement(params, step.signal);
    const double mult = spec_.form == ModelForm::TypeA ? keep : 1.0;
    const double exponent = spec_.form == ModelForm::TypeB ? params.beta / keep : params.beta;
    // With nobody infectious the pressure is all zero whatever the exponent.
    const std::vector<double>& pressure = step.infectious.empty() ? step.pressure[0] : pressure_for(step, exponent);
    for (std::size_t k = 0; k < step.at_risk.size(); ++k) {
      const double omega = constant ? params.alpha : params.alpha0 + params.alpha1 * z_[step.at_risk[k]];
      const double x = omega * mult * pressure[k] + params.epsilon;
      if (!sink(step.infected[k] ? log_infection(x) : -x)) return;
    }
  }
}

double LikelihoodEngine::log_likelihood(const ModelParams& params) {
  double total = 0.0;
  evaluate(params, [&total](double term) {
    total += term;
    return total != kNegInf;
  });
  return std::isnan(total) ? kNegInf : total;
}

void LikelihoodEngine::pointwise(const ModelParams& params, std::vector<double>& out) {
  out.clear();
  out.reserve(term_count_);
  evaluate(params, [&out](double term) {
    out.push_back(term);
    return true;
  });
}

std::vector<double> LikelihoodEngine::alarm_values(const ModelParams& params) const {
  std::vector<double> a;
  a.reserve(steps_.size());
  for (const Step& step : steps_)
    a.push_back(spec_.alarm ? alarm_value(spec_.alarm->family, params.delta1, params.delta2, step.signal) : 0.0);
  return a;
}

double log_likelihood(const ModelSpec& spec, const Population& pop, const EpidemicHistory& history,
                      const ModelParams& params) {
  LikelihoodEngine engine(spec, pop, history);
  return engine.log_likelihood(params);
}

std::vector<double> pointwise_log_terms(const ModelSpec& spec, const Population& pop,
                                        const EpidemicHistory& history, const ModelParams& params) {
  LikelihoodEngine engine(spec, pop, history);
  std::vector<double> out;
  engine.pointwise(params, out);
  return out;
}

}  // namespace bcilm
