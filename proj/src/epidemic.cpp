#include "bcilm/epidemic.hpp"

#include <sstream>

#include "bcilm/csv.hpp"
#include "bcilm/error.hpp"

namespace bcilm {

std::string to_string(Framework f) { return f == Framework::SIR ? "SIR" : "SEIR"; }

Framework framework_from_string(const std::string& s) {
  if (s == "SIR" || s == "sir") return Framework::SIR;
  if (s == "SEIR" || s == "seir") return Framework::SEIR;
  throw ConfigError("unknown framework '" + s + "' (expected SIR or SEIR)");
}

char to_char(Compartment c) {
  switch (c) {
    case Compartment::S: return 'S';
    case Compartment::E: return 'E';
    case Compartment::I: return 'I';
    case Compartment::R: return 'R';
  }
  return '?';
}

void PeriodSpec::validate(Framework framework) const {
  if (infectious_period < 1) throw ConfigError("infectious period must be at least 1");
  if (framework == Framework::SEIR && (!exposed_period || *exposed_period < 1))
    throw ConfigError("SEIR framework needs an exposed period of at least 1");
}

EpidemicHistory::EpidemicHistory(Framework framework, std::vector<TransitionTimes> transitions, int t_min,
                                 int t_max)
    : framework_(framework), transitions_(std::move(transitions)), t_min_(t_min), t_max_(t_max) {
  if (t_max_ < t_min_) throw ConfigError("study window must satisfy t_min <= t_max");
  validate();
}

void EpidemicHistory::validate() const {
  for (std::size_t i = 0; i < transitions_.size(); ++i) {
    const auto& tr = transitions_[i];
    const std::string who = "individual " + std::to_string(i) + ": ";
    if (framework_ == Framework::SIR) {
      if (tr.exposure_time) throw ValidationError(who + "exposure time given under SIR");
    } else {
      if (tr.infection_time && !tr.exposure_time)
        throw ValidationError(who + "infection time without exposure time under SEIR");
      if (tr.exposure_time && tr.infection_time && !(*tr.exposure_time < *tr.infection_time))
        throw ValidationError(who + "exposure time must precede infection time");
    }
    if (tr.removal_time) {
      if (!tr.infection_time) throw ValidationError(who + "removal time without infection time");
      if (!(*tr.infection_time < *tr.removal_time))
        throw ValidationError(who + "removal time must be after infection time");
    }
  }
}

Compartment EpidemicHistory::state_of(std::size_t i, int t) const {
  if (t < t_min_ || t > t_max_)
    throw RangeError("time " + std::to_string(t) + " outside study window [" + std::to_string(t_min_) + ", " +
                     std::to_string(t_max_) + "]");
  if (i >= transitions_.size()) throw RangeError("individual " + std::to_string(i) + " out of range");
  return state_unchecked(i, t);
}

Compartment EpidemicHistory::state_unchecked(std::size_t i, int t) const {
  const auto& tr = transitions_[i];
  if (tr.removal_time && t > *tr.removal_time) return Compartment::R;
  if (tr.infection_time && t > *tr.infection_time) return Compartment::I;
  if (framework_ == Framework::SEIR && tr.exposure_time && t > *tr.exposure_time) return Compartment::E;
  return Compartment::S;
}

bool EpidemicHistory::infectious_at(std::size_t i, int t) const {
  const auto& tr = transitions_[i];
  return tr.infection_time && t > *tr.infection_time && (!tr.removal_time || t <= *tr.removal_time);
}

std::size_t EpidemicHistory::infectious_count(int t) const {
  std::size_t c = 0;
  for (std::size_t i = 0; i < transitions_.size(); ++i) c += infectious_at(i, t) ? 1 : 0;
  return c;
}

EpidemicHistory::Counts EpidemicHistory::counts(int t) const {
  Counts c;
  for (std::size_t i = 0; i < transitions_.size(); ++i) {
    switch (state_of(i, t)) {
      case Compartment::S: ++c.s; break;
      case Compartment::E: ++c.e; break;
      case Compartment::I: ++c.i; break;
      case Compartment::R: ++c.r; break;
    }
  }
  return c;
}

std::vector<std::size_t> EpidemicHistory::new_infections(int t) const {
  if (t < t_min_ || t + 1 > t_max_)
    throw RangeError("new infections need t and t+1 inside the window; got t=" + std::to_string(t));
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < transitions_.size(); ++i) {
    const auto ev = event_time(i);
    if (ev && *ev == t) out.push_back(i);
  }
  return out;
}

std::vector<int> EpidemicHistory::epidemic_curve() const {
  std::vector<int> curve(static_cast<std::size_t>(t_max_ - t_min_), 0);
  for (std::size_t i = 0; i < transitions_.size(); ++i) {
    const auto ev = event_time(i);
    if (ev && *ev >= t_min_ && *ev < t_max_) ++curve[*ev - t_min_];
  }
  return curve;
}

std::size_t EpidemicHistory::seed_count() const {
  std::size_t c = 0;
  for (std::size_t i = 0; i < transitions_.size(); ++i) {
    const auto ev = event_time(i);
    c += (ev && *ev < t_min_) ? 1 : 0;
  }
  return c;
}

std::size_t EpidemicHistory::ever_infected() const {
  std::size_t c = 0;
  for (std::size_t i = 0; i < transitions_.size(); ++i) {
    const auto ev = event_time(i);
    c += (ev && *ev < t_max_) ? 1 : 0;
  }
  return c;
}

EpidemicHistory EpidemicHistory::truncated(int t_cut) const {
  if (t_cut < t_min_ || t_cut + 1 > t_max_)
    throw RangeError("cut time " + std::to_string(t_cut) + " outside observed window");
  std::vector<TransitionTimes> tr = transitions_;
  for (std::size_t i = 0; i < tr.size(); ++i) {
    const auto ev = event_time(i);
    if (ev && *ev > t_cut) tr[i] = TransitionTimes{};
  }
  return EpidemicHistory(framework_, std::move(tr), t_min_, t_cut + 1);
}

TransitionTimes schedule_transitions(Framework framework, const PeriodSpec& periods, std::size_t id,
                                     int event_time) {
  TransitionTimes tr;
  int infection = event_time;
  if (framework == Framework::SEIR) {
    tr.exposure_time = event_time;
    infection = event_time + periods.exposed_period.value_or(1);
  }
  tr.infection_time = infection;
  int removal = infection + periods.infectious_period;
  if (auto it = periods.removal_overrides.find(id); it != periods.removal_overrides.end()) {
    if (it->second <= infection)
      throw ValidationError("individual " + std::to_string(id) + ": removal override " +
                            std::to_string(it->second) + " precedes the infectious period");
    removal = std::min(removal, it->second);
  }
  tr.removal_time = removal;
  return tr;
}

EpidemicHistory load_events(const std::filesystem::path& path, Framework framework, int t_min, int t_max) {
  const csv::Table t = csv::read(path);
  const std::size_t c_id = t.require("id");
  const std::size_t c_exp = t.require("exposure_time");
  const std::size_t c_inf = t.require("infection_time");
  const std::size_t c_rem = t.require("removal_time");
  const std::size_t n = t.rows.size();
  std::vector<TransitionTimes> tr(n);
  std::vector<bool> seen(n, false);
  for (std::size_t r = 0; r < n; ++r) {
    const long long id = csv::to_int(t, r, c_id);
    if (id < 0 || static_cast<std::size_t>(id) >= n)
      throw ParseError(t.where(r) + ": id " + std::to_string(id) + " outside 0.." + std::to_string(n - 1));
    if (seen[id]) throw ParseError(t.where(r) + ": duplicate id " + std::to_string(id));
    seen[id] = true;
    auto as_int = [](std::optional<long long> v) -> std::optional<int> {
      return v ? std::optional<int>(static_cast<int>(*v)) : std::nullopt;
    };
    tr[id].exposure_time = as_int(csv::to_optional_int(t, r, c_exp));
    tr[id].infection_time = as_int(csv::to_optional_int(t, r, c_inf));
    tr[id].removal_time = as_int(csv::to_optional_int(t, r, c_rem));
  }
  try {
    return EpidemicHistory(framework, std::move(tr), t_min, t_max);
  } catch (const ValidationError& e) {
    throw ValidationError(t.source + ": " + e.what());
  }
}

void save_events(const EpidemicHistory& history, const std::filesystem::path& path) {
  std::ostringstream os;
  os << "id,exposure_time,infection_time,removal_time\n";
  auto cell = [&os](const std::optional<int>& v) {
    if (v) os << *v;
  };
  for (std::size_t i = 0; i < history.size(); ++i) {
    const auto& tr = history.transitions(i);
    os << i << ',';
    cell(tr.exposure_time);
    os << ',';
    cell(tr.infection_time);
    os << ',';
    cell(tr.removal_time);
    os << '\n';
  }
  csv::write_file(path, os.str());
}

}  // namespace bcilm
