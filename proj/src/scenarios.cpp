#include "bcilm/scenarios.hpp"

#include <array>

#include "bcilm/error.hpp"

namespace bcilm {

std::string to_string(Strength s) {
  switch (s) {
    case Strength::Weak: return "weak";
    case Strength::Medium: return "medium";
    case Strength::Strong: return "strong";
  }
  return "?";
}

Strength strength_from_string(const std::string& s) {
  if (s == "weak") return Strength::Weak;
  if (s == "medium") return Strength::Medium;
  if (s == "strong") return Strength::Strong;
  throw ConfigError("unknown BC strength '" + s + "' (expected weak, medium or strong)");
}

AlarmFamily grid_family(int model) {
  switch (model) {
    case 1: return AlarmFamily::Threshold;
    case 2: return AlarmFamily::Exponential;
    case 3: return AlarmFamily::ScaledExponential;
    case 4: return AlarmFamily::Hill;
    default: throw ConfigError("grid model number must be 1-4, got " + std::to_string(model));
  }
}

ModelSpec grid_spec(const std::string& label) {
  ModelSpec spec;
  if (label == "Base") return spec;
  if (label.size() != 2 || label[0] < '1' || label[0] > '4' || (label[1] != 'A' && label[1] != 'B'))
    throw ConfigError("unknown grid model '" + label + "' (expected Base or 1A .. 4B)");
  spec.form = label[1] == 'A' ? ModelForm::TypeA : ModelForm::TypeB;
  AlarmSpec alarm;
  alarm.family = grid_family(label[0] - '0');
  alarm.signal.kind = alarm.family == AlarmFamily::Hill ? SignalKind::InternalProportion : SignalKind::InternalCount;
  spec.alarm = alarm;
  return spec;
}

std::string grid_label(const ModelSpec& spec) {
  if (!spec.alarm) return "Base";
  int model = 0;
  switch (spec.alarm->family) {
    case AlarmFamily::Threshold: model = 1; break;
    case AlarmFamily::Exponential: model = 2; break;
    case AlarmFamily::ScaledExponential: model = 3; break;
    case AlarmFamily::Hill: model = 4; break;
  }
  return std::to_string(model) + (spec.form == ModelForm::TypeA ? "A" : "B");
}

namespace {

struct Row {
  double alpha, beta;
  std::array<double, 3> delta1;  // weak, medium, strong
  double delta2;
};

Row table_row(int model, bool type_a) {
  switch (model) {
    case 1: return type_a ? Row{2.2, 2.0, {0.50, 0.65, 0.80}, 40} : Row{2.2, 2.0, {0.10, 0.15, 0.20}, 40};
    case 2: return type_a ? Row{2.4, 2.0, {0.005, 0.01, 0.015}, 0} : Row{2.4, 2.0, {0.001, 0.0015, 0.002}, 0};
    case 3: return type_a ? Row{2.4, 2.0, {0.02, 0.03, 0.04}, 0.80} : Row{2.4, 2.0, {0.005, 0.007, 0.009}, 0.40};
    default: return type_a ? Row{2.4, 2.0, {0.10, 0.075, 0.05}, 3} : Row{2.4, 2.0, {0.20, 0.15, 0.10}, 3};
  }
}

}  // namespace

Scenario grid_scenario(const std::string& label, Strength strength) {
  if (label == "Base") throw ConfigError("the baseline has no BC strength; use baseline_scenario");
  Scenario s;
  s.label = label;
  s.spec = grid_spec(label);
  const Row r = table_row(label[0] - '0', label[1] == 'A');
  s.params.alpha = r.alpha;
  s.params.beta = r.beta;
  s.params.delta1 = r.delta1[static_cast<std::size_t>(strength)];
  s.params.delta2 = r.delta2;
  return s;
}

Scenario baseline_scenario(double alpha, double beta) {
  Scenario s;
  s.label = "Base";
  s.params.alpha = alpha;
  s.params.beta = beta;
  return s;
}

PriorSpec default_priors(const ModelSpec& spec) {
  PriorSpec p;
  if (spec.susceptibility == SusceptibilityKind::Constant) {
    p.emplace_back("alpha", Prior::uniform(0, 100));
  } else {
    p.emplace_back("alpha0", Prior::uniform(0, 100));
    p.emplace_back("alpha1", Prior::uniform(0, 100));
  }
  p.emplace_back("beta", Prior::uniform(0, 100));
  if (!spec.alarm) return p;
  switch (spec.alarm->family) {
    case AlarmFamily::Threshold:
      p.emplace_back("delta1", Prior::beta(1, 1));
      p.emplace_back("delta2", Prior::gamma(3, 1.0 / 20.0));  // shape 3, scale 20
      break;
    case AlarmFamily::Exponential:
      p.emplace_back("delta1", Prior::beta(1, 2));
      break;
    case AlarmFamily::ScaledExponential:
      p.emplace_back("delta1", Prior::beta(1, 2));
      p.emplace_back("delta2", Prior::beta(1, 1));
      break;
    case AlarmFamily::Hill:
      // delta1 is a proportion and delta2 a Hill coefficient near 3.
      p.emplace_back("delta1", Prior::beta(1, 2));
      p.emplace_back("delta2", Prior::gamma(2, 1.0 / 4.0));  // shape 2, scale 4
      break;
  }
  return p;
}

}  // namespace bcilm
