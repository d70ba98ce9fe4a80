#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace bcilm {

enum class Framework { SIR, SEIR };
enum class Compartment { S, E, I, R };

std::string to_string(Framework f);
Framework framework_from_string(const std::string& s);
char to_char(Compartment c);

/// Transition times of one individual.
///
/// Times are the steps at which the transition event happens; the new state
/// holds from the following step. Under SIR an individual with
/// `infection_time = t` is infectious over t+1 .. removal_time and removed
/// afterwards. Under SEIR it is exposed over exposure_time+1 .. infection_time.
struct TransitionTimes {
  std::optional<int> exposure_time;
  std::optional<int> infection_time;
  std::optional<int> removal_time;

  bool operator==(const TransitionTimes&) const = default;
};

/// Known disease periods in time steps.
struct PeriodSpec {
  int infectious_period = 3;
  std::optional<int> exposed_period;
  /// Removal time overrides by individual (e.g. culls); the earlier of the
  /// override and the natural removal is used.
  std::map<std::size_t, int> removal_overrides;

  void validate(Framework framework) const;
};

/// Complete event history over the study window [t_min, t_max].
class EpidemicHistory {
 public:
  EpidemicHistory() = default;
  EpidemicHistory(Framework framework, std::vector<TransitionTimes> transitions, int t_min, int t_max);

  Framework framework() const { return framework_; }
  std::size_t size() const { return transitions_.size(); }
  int t_min() const { return t_min_; }
  int t_max() const { return t_max_; }
  const std::vector<TransitionTimes>& transitions() const { return transitions_; }
  const TransitionTimes& transitions(std::size_t i) const { return transitions_[i]; }

  /// Step at which i leaves S: exposure (SEIR) or infection (SIR).
  std::optional<int> event_time(std::size_t i) const {
    return framework_ == Framework::SEIR ? transitions_[i].exposure_time : transitions_[i].infection_time;
  }

  /// Throws RangeError outside [t_min, t_max].
  Compartment state_of(std::size_t i, int t) const;
  /// Same as state_of without the window check.
  Compartment state_unchecked(std::size_t i, int t) const;
  bool infectious_at(std::size_t i, int t) const;
  std::size_t infectious_count(int t) const;

  struct Counts {
    std::size_t s = 0, e = 0, i = 0, r = 0;
  };
  Counts counts(int t) const;

  /// I(t+1) \ I(t) (SIR) or E(t+1) \ E(t) (SEIR); t in [t_min, t_max - 1].
  std::vector<std::size_t> new_infections(int t) const;
  /// |new_infections(t)| for t = t_min .. t_max - 1.
  std::vector<int> epidemic_curve() const;

  /// Individuals whose event happened before t_min (initial infections).
  std::size_t seed_count() const;
  /// Individuals whose event happened at or before t_max - 1.
  std::size_t ever_infected() const;

  /// History restricted to the window [t_min, t_cut + 1]: events after t_cut
  /// become unobserved and the individual stays susceptible.
  EpidemicHistory truncated(int t_cut) const;

  bool operator==(const EpidemicHistory&) const = default;

 private:
  void validate() const;

  Framework framework_ = Framework::SIR;
  std::vector<TransitionTimes> transitions_;
  int t_min_ = 1;
  int t_max_ = 1;
};

/// Transition times for an individual whose event occurs at `event_time`.
TransitionTimes schedule_transitions(Framework framework, const PeriodSpec& periods, std::size_t id,
                                     int event_time);

/// Events CSV: `id,exposure_time,infection_time,removal_time`, empty cell for
/// "never". Every id 0..n-1 must appear exactly once.
EpidemicHistory load_events(const std::filesystem::path& path, Framework framework, int t_min, int t_max);
void save_events(const EpidemicHistory& history, const std::filesystem::path& path);

}  // namespace bcilm
