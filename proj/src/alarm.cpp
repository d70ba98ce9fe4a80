#include "bcilm/alarm.hpp"

#include <cmath>

#include "bcilm/csv.hpp"
#include "bcilm/epidemic.hpp"
#include "bcilm/error.hpp"

namespace bcilm {

std::string to_string(AlarmFamily f) {
  switch (f) {
    case AlarmFamily::Threshold: return "threshold";
    case AlarmFamily::Exponential: return "exponential";
    case AlarmFamily::ScaledExponential: return "scaled_exponential";
    case AlarmFamily::Hill: return "hill";
  }
  return "?";
}

AlarmFamily alarm_family_from_string(const std::string& s) {
  if (s == "threshold") return AlarmFamily::Threshold;
  if (s == "exponential") return AlarmFamily::Exponential;
  if (s == "scaled_exponential") return AlarmFamily::ScaledExponential;
  if (s == "hill") return AlarmFamily::Hill;
  throw ConfigError("unknown alarm family '" + s +
                    "' (expected threshold, exponential, scaled_exponential or hill)");
}

bool has_delta2(AlarmFamily f) { return f != AlarmFamily::Exponential; }

std::string to_string(SignalKind k) {
  switch (k) {
    case SignalKind::InternalCount: return "count";
    case SignalKind::InternalProportion: return "proportion";
    case SignalKind::External: return "external";
  }
  return "?";
}

SignalKind signal_kind_from_string(const std::string& s) {
  if (s == "count") return SignalKind::InternalCount;
  if (s == "proportion") return SignalKind::InternalProportion;
  if (s == "external") return SignalKind::External;
  throw ConfigError("unknown alarm signal '" + s + "' (expected count, proportion or external)");
}

double ExternalSeries::at(int s) const {
  const int w = presmoothed ? 1 : window;
  double sum = 0.0;
  for (int k = s - w + 1; k <= s; ++k) {
    const long idx = static_cast<long>(k) - origin;
    if (idx < 0 || idx >= static_cast<long>(values.size()))
      throw DomainError("external alarm signal has no value at time " + std::to_string(k));
    sum += values[static_cast<std::size_t>(idx)];
  }
  return sum / w;
}

std::vector<int> ExternalSeries::missing(int from, int to) const {
  const int w = presmoothed ? 1 : window;
  std::vector<int> out;
  for (int k = from - w + 1; k <= to; ++k) {
    const long idx = static_cast<long>(k) - origin;
    if (idx < 0 || idx >= static_cast<long>(values.size())) out.push_back(k);
  }
  return out;
}

ExternalSeries load_external_series(const std::string& path, int window, bool presmoothed) {
  if (window < 1) throw ConfigError("rolling-average window must be at least 1");
  const csv::Table t = csv::read(path);
  const std::size_t c_t = t.require("t");
  const std::size_t c_v = t.require("value");
  ExternalSeries series;
  series.window = window;
  series.presmoothed = presmoothed;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const long long time = csv::to_int(t, r, c_t);
    const double v = csv::to_double(t, r, c_v);
    if (v < 0.0) throw ParseError(t.where(r) + ": signal values must be non-negative");
    if (r == 0) {
      series.origin = static_cast<int>(time);
    } else if (time != series.origin + static_cast<long long>(r)) {
      throw ParseError(t.where(r) + ": times must be contiguous and increasing");
    }
    series.values.push_back(v);
  }
  return series;
}

double alarm_value(AlarmFamily family, double delta1, double delta2, double signal) {
  if (!(signal >= 0.0)) throw DomainError("alarm signal must be non-negative");
  switch (family) {
    case AlarmFamily::Threshold:
      return signal > delta2 ? delta1 : 0.0;
    case AlarmFamily::Exponential:
      return -std::expm1(-delta1 * signal);
    case AlarmFamily::ScaledExponential:
      return delta2 * -std::expm1(-delta1 * signal);
    case AlarmFamily::Hill: {
      if (signal > 1.0) throw DomainError("Hill alarm needs a proportion signal in [0, 1]");
      const double num = std::pow(signal, delta2);
      const double den = std::pow(delta1, delta2) + num;
      return den > 0.0 ? num / den : 0.0;
    }
  }
  return 0.0;
}

double alarm_complement(AlarmFamily family, double delta1, double delta2, double signal) {
  if (!(signal >= 0.0)) throw DomainError("alarm signal must be non-negative");
  switch (family) {
    case AlarmFamily::Threshold:
      return signal > delta2 ? 1.0 - delta1 : 1.0;
    case AlarmFamily::Exponential:
      return std::exp(-delta1 * signal);
    case AlarmFamily::ScaledExponential:
      return 1.0 - delta2 * -std::expm1(-delta1 * signal);
    case AlarmFamily::Hill: {
      if (signal > 1.0) throw DomainError("Hill alarm needs a proportion signal in [0, 1]");
      const double half = std::pow(delta1, delta2);
      const double den = half + std::pow(signal, delta2);
      return den > 0.0 ? half / den : 1.0;
    }
  }
  return 1.0;
}

bool alarm_parameters_admissible(AlarmFamily family, double delta1, double delta2) {
  const bool d1 = delta1 > 0.0 && delta1 < 1.0;
  switch (family) {
    case AlarmFamily::Threshold: return d1 && delta2 > 0.0;
    case AlarmFamily::Exponential: return d1;
    case AlarmFamily::ScaledExponential: return d1 && delta2 > 0.0 && delta2 <= 1.0;
    case AlarmFamily::Hill: return d1 && delta2 > 0.0;
  }
  return false;
}

std::vector<double> alarm_signal_series(const AlarmSignal& signal, const EpidemicHistory& history) {
  const int t0 = history.t_min();
  const int t1 = history.t_max();
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(std::max(0, t1 - t0)));
  if (signal.kind == SignalKind::External) {
    if (!signal.series) throw ConfigError("external alarm signal selected but no series supplied");
    const auto gaps = signal.series->missing(t0 - 1, t1 - 2);
    if (!gaps.empty()) {
      std::string msg = "external alarm signal is missing times:";
      for (int g : gaps) msg += " " + std::to_string(g);
      throw DomainError(msg);
    }
    for (int t = t0; t < t1; ++t) out.push_back(signal.series->at(t - 1));
    return out;
  }
  for (int t = t0; t < t1; ++t) out.push_back(alarm_signal_at(signal, history, t));
  return out;
}

double alarm_signal_at(const AlarmSignal& signal, const EpidemicHistory& history, int t) {
  if (signal.kind == SignalKind::External) {
    if (!signal.series) throw ConfigError("external alarm signal selected but no series supplied");
    return signal.series->at(t - 1);
  }
  const double count = static_cast<double>(history.infectious_count(std::max(t - 1, history.t_min())));
  if (signal.kind == SignalKind::InternalProportion)
    return count / static_cast<double>(std::max<std::size_t>(history.size(), 1));
  return count;
}

std::vector<double> alarm_series(const AlarmSpec& spec, double delta1, double delta2,
                                 const EpidemicHistory& history) {
  auto signal = alarm_signal_series(spec.signal, history);
  for (double& s : signal) s = alarm_value(spec.family, delta1, delta2, s);
  return signal;
}

}  // namespace bcilm
