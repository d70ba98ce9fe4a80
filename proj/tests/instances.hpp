#pragma once

// Random tiny model instances covering every form, alarm family and signal
// kind, used to check the likelihood against the brute-force oracle.

#include <random>
#include <string>

#include "bcilm/epidemic.hpp"
#include "bcilm/model.hpp"
#include "bcilm/population.hpp"
#include "bcilm/rng.hpp"

namespace instances {

struct Instance {
  bcilm::ModelSpec spec;
  bcilm::Population pop;
  bcilm::EpidemicHistory history;
  std::string label;
};

inline double unif(bcilm::Rng& rng, double a, double b) {
  return std::uniform_real_distribution<double>(a, b)(rng);
}

inline int pick(bcilm::Rng& rng, int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

/// Instance k cycles through the 13 (form, family) combinations; everything
/// else is random.
inline Instance make(std::uint64_t seed, int k) {
  using namespace bcilm;
  Rng rng(derive_seed(seed, static_cast<std::uint64_t>(k)));
  Instance in;
  const int combo = k % 13;
  in.spec.form = combo == 0 ? ModelForm::Baseline : (combo <= 6 ? ModelForm::TypeA : ModelForm::TypeB);
  in.spec.framework = pick(rng, 2) ? Framework::SEIR : Framework::SIR;
  in.spec.kernel_offset = pick(rng, 2) ? 1.0 : 0.5;
  const bool binary = pick(rng, 3) == 0;
  in.spec.susceptibility = binary ? SusceptibilityKind::BinaryCovariate : SusceptibilityKind::Constant;

  const int n = 2 + pick(rng, 7);        // 2..8 individuals
  const int steps = 1 + pick(rng, 5);    // T <= 5 transition steps
  const int t_min = 1 + pick(rng, 3);
  std::vector<Individual> people;
  for (int i = 0; i < n; ++i)
    people.push_back({static_cast<std::size_t>(i), unif(rng, 0, 10), unif(rng, 0, 10),
                      {static_cast<double>(pick(rng, 2))}});
  in.pop = Population(std::move(people), {"z"});

  PeriodSpec periods;
  periods.infectious_period = 1 + pick(rng, 3);
  if (in.spec.framework == Framework::SEIR) periods.exposed_period = 1 + pick(rng, 2);
  std::vector<TransitionTimes> tr(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    // Event before the window (seed), inside it, or never.
    const int r = pick(rng, steps + 3);
    if (i == 0 || r == 0) tr[i] = schedule_transitions(in.spec.framework, periods, i, t_min - 1 - pick(rng, 2));
    else if (r <= steps) tr[i] = schedule_transitions(in.spec.framework, periods, i, t_min + r - 1);
  }
  in.history = EpidemicHistory(in.spec.framework, std::move(tr), t_min, t_min + steps);

  if (in.spec.form != ModelForm::Baseline) {
    AlarmSpec alarm;
    alarm.family = static_cast<AlarmFamily>((combo - 1) % 6 < 4 ? (combo - 1) % 6 : pick(rng, 4));
    const int kind = pick(rng, 3);
    if (kind == 2) {
      ExternalSeries s;
      s.window = 1 + pick(rng, 3);
      s.presmoothed = pick(rng, 4) == 0;
      s.origin = t_min - 1 - 3;
      for (int t = s.origin; t <= t_min + steps; ++t) s.values.push_back(unif(rng, 0, 1));
      alarm.signal.kind = SignalKind::External;
      alarm.signal.external_is_proportion = true;
      alarm.signal.series = std::move(s);
    } else if (kind == 1 || alarm.family == AlarmFamily::Hill) {
      alarm.signal.kind = SignalKind::InternalProportion;
    } else {
      alarm.signal.kind = SignalKind::InternalCount;
    }
    in.spec.alarm = std::move(alarm);
  }
  in.spec.validate();
  in.label = "instance " + std::to_string(k) + " (" + to_string(in.spec.form) +
             (in.spec.alarm ? "/" + to_string(in.spec.alarm->family) + "/" + to_string(in.spec.alarm->signal.kind)
                            : std::string()) +
             "/" + to_string(in.spec.framework) + (binary ? "/binary" : "") + ")";
  return in;
}

/// Random admissible parameters for the instance's model.
inline bcilm::ModelParams params(const Instance& in, bcilm::Rng& rng) {
  using namespace bcilm;
  ModelParams p;
  p.alpha = unif(rng, 0.2, 5);
  p.alpha0 = unif(rng, 0.2, 3);
  p.alpha1 = unif(rng, 0.0, 2);
  p.beta = unif(rng, 0.3, 3);
  p.epsilon = pick(rng, 4) ? unif(rng, 1e-4, 0.05) : 0.0;
  if (in.spec.alarm) {
    switch (in.spec.alarm->family) {
      case AlarmFamily::Threshold: p.delta1 = unif(rng, 0.01, 0.99); p.delta2 = unif(rng, 0, 3); break;
      case AlarmFamily::Exponential: p.delta1 = unif(rng, 0.01, 0.99); break;
      case AlarmFamily::ScaledExponential: p.delta1 = unif(rng, 0.01, 0.99); p.delta2 = unif(rng, 0.01, 1); break;
      case AlarmFamily::Hill: p.delta1 = unif(rng, 0.05, 0.9); p.delta2 = unif(rng, 0.5, 5); break;
    }
  }
  return p;
}

}  // namespace instances
