#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bcilm/alarm.hpp"
#include "bcilm/epidemic.hpp"
#include "bcilm/population.hpp"

namespace bcilm {

/// Where the alarm enters the infection probability.
///   Baseline: P = 1 - exp(-Omega_S(i) sum_j (d_ij + c)^-beta - eps)
///   TypeA:    Omega_S(i) scaled by (1 - a_t)
///   TypeB:    exponent -beta replaced by -beta / (1 - a_t)
enum class ModelForm { Baseline, TypeA, TypeB };
enum class SusceptibilityKind { Constant, BinaryCovariate };

std::string to_string(ModelForm f);
ModelForm model_form_from_string(const std::string& s);

/// Full parameter vector. Constant susceptibility uses `alpha`; the binary
/// covariate model uses `alpha0 + alpha1 * z_i`.
struct ModelParams {
  double alpha = 0.0;
  double alpha0 = 0.0;
  double alpha1 = 0.0;
  double beta = 0.0;
  double delta1 = 0.0;
  double delta2 = 0.0;
  double epsilon = 0.0;

  /// Access by the external parameter name; throws ConfigError for unknown names.
  double get(std::string_view name) const;
  void set(std::string_view name, double value);

  bool operator==(const ModelParams&) const = default;
};

/// Names accepted by ModelParams::get/set, in canonical order.
const std::vector<std::string>& all_parameter_names();

struct ModelSpec {
  ModelForm form = ModelForm::Baseline;
  std::optional<AlarmSpec> alarm;
  Framework framework = Framework::SIR;
  SusceptibilityKind susceptibility = SusceptibilityKind::Constant;
  /// Covariate column holding z_i for the binary susceptibility model.
  std::string covariate = "z";
  /// c in (d_ij + c)^-beta.
  double kernel_offset = 1.0;

  /// Throws ConfigError for inconsistent combinations.
  void validate() const;
  /// Parameters this model uses, in canonical order (epsilon excluded).
  std::vector<std::string> parameter_names() const;
  /// All used parameters inside their constraints (alarm parameters only when
  /// `check_alarm`).
  bool in_support(const ModelParams& p, bool check_alarm = true) const;
  bool has_alarm() const { return form != ModelForm::Baseline; }
};

/// P(i, t) by direct evaluation. Throws ValidationError when i is not
/// susceptible at t.
double infection_probability(const ModelSpec& spec, const Population& pop, const EpidemicHistory& history,
                             const ModelParams& params, std::size_t i, int t);

/// Log-likelihood and per-(i,t) terms for one data set.
///
/// Index lists for every time step are built once. Infectious-pressure sums
/// are memoized per step together with the spatial exponent that produced
/// them and recomputed only when that exponent changes, so values are
/// identical to a full recomputation.
class LikelihoodEngine {
 public:
  LikelihoodEngine(const ModelSpec& spec, const Population& pop, const EpidemicHistory& history);

  double log_likelihood(const ModelParams& params);
  /// One entry per susceptible individual per step (t ascending, id ascending);
  /// log P for an infection, log(1 - P) otherwise.
  void pointwise(const ModelParams& params, std::vector<double>& out);
  std::size_t term_count() const { return term_count_; }
  /// a_t for each step of the window (all zero for Baseline).
  std::vector<double> alarm_values(const ModelParams& params) const;
  const ModelSpec& spec() const { return spec_; }

 private:
  struct Step {
    int t = 0;
    std::vector<std::uint32_t> at_risk;
    std::vector<std::uint8_t> infected;
    std::vector<std::uint32_t> infectious;
    double signal = 0.0;
    /// log(d + c) for every (at-risk, infectious) pair, row-major.
    std::vector<double> log_dist;
    /// Two pressure slots so that a rejected proposal does not evict the
    /// pressure of the current state.
    std::vector<double> pressure[2];
    double cached_exponent[2] = {-1.0, -1.0};
    std::uint8_t last_used = 0;
  };

  template <typename Sink>
  void evaluate(const ModelParams& params, Sink&& sink);
  const std::vector<double>& pressure_for(Step& step, double exponent);
  double complement(const ModelParams& params, double signal) const;

  ModelSpec spec_;
  std::size_t n_ = 0;
  std::vector<double> z_;
  std::vector<Step> steps_;
  std::size_t term_count_ = 0;
};

double log_likelihood(const ModelSpec& spec, const Population& pop, const EpidemicHistory& history,
                      const ModelParams& params);
std::vector<double> pointwise_log_terms(const ModelSpec& spec, const Population& pop,
                                        const EpidemicHistory& history, const ModelParams& params);

/// log P from the exponent x = -log(1 - P), stable for small x.
double log_infection(double x);

}  // namespace bcilm
