#pragma once

#include <optional>
#include <string>
#include <vector>

namespace bcilm {

class EpidemicHistory;

enum class AlarmFamily { Threshold, Exponential, ScaledExponential, Hill };

std::string to_string(AlarmFamily f);
AlarmFamily alarm_family_from_string(const std::string& s);
/// Whether the family uses a second parameter delta2.
bool has_delta2(AlarmFamily f);

enum class SignalKind { InternalCount, InternalProportion, External };

std::string to_string(SignalKind k);
SignalKind signal_kind_from_string(const std::string& s);

/// An externally supplied signal indexed by integer time.
struct ExternalSeries {
  int origin = 0;  ///< time of values.front()
  std::vector<double> values;
  /// Rolling-average window applied by this library; 1 = use values as is.
  int window = 1;
  /// Values are already smoothed; `window` is then ignored.
  bool presmoothed = false;

  /// Signal value at time s (rolling mean over s-window+1 .. s when not
  /// presmoothed). Throws DomainError when any needed value is missing.
  double at(int s) const;
  /// Times in [from, to] whose signal cannot be resolved.
  std::vector<int> missing(int from, int to) const;
};

/// Loads an external series from `t,value` CSV. Times must be contiguous.
ExternalSeries load_external_series(const std::string& path, int window, bool presmoothed);

struct AlarmSignal {
  SignalKind kind = SignalKind::InternalCount;
  std::optional<ExternalSeries> series;
  /// External series values are proportions (required for Hill).
  bool external_is_proportion = false;
};

struct AlarmSpec {
  AlarmFamily family = AlarmFamily::Exponential;
  AlarmSignal signal;
};

/// a_t for the given signal value.
///
/// Threshold: delta1 if signal > delta2 else 0. Exponential: 1 - exp(-delta1 s).
/// ScaledExponential: delta2 (1 - exp(-delta1 s)). Hill: s^delta2 / (delta1^delta2 + s^delta2).
double alarm_value(AlarmFamily family, double delta1, double delta2, double signal);

/// 1 - a_t evaluated without cancellation. Equals exactly 1 when delta1 = 0 for
/// the Threshold, Exponential and ScaledExponential families.
double alarm_complement(AlarmFamily family, double delta1, double delta2, double signal);

/// Whether (delta1, delta2) lie in the admissible region of the family.
bool alarm_parameters_admissible(AlarmFamily family, double delta1, double delta2);

/// Lagged signal driving a_t for each t in [t_min, t_max - 1]: the signal read
/// at t - 1. For internal signals the time before the window start uses the
/// prevalence at t_min (the initial infections).
std::vector<double> alarm_signal_series(const AlarmSignal& signal, const EpidemicHistory& history);

/// The lagged signal for a_t at a single time t >= t_min.
double alarm_signal_at(const AlarmSignal& signal, const EpidemicHistory& history, int t);

/// a_t over [t_min, t_max - 1].
std::vector<double> alarm_series(const AlarmSpec& spec, double delta1, double delta2,
                                 const EpidemicHistory& history);

}  // namespace bcilm
