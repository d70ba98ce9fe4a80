#include "bcilm/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "bcilm/analysis.hpp"
#include "bcilm/error.hpp"
#include "bcilm/output.hpp"

namespace bcilm {

using json = nlohmann::json;

namespace {

void check_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& item : j.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return item.key() == a; })) {
      std::string msg = where + ": unknown key '" + item.key() + "' (allowed:";
      for (const char* a : allowed) msg += std::string(" ") + a;
      throw ConfigError(msg + ")");
    }
  }
}

template <typename T>
T get(const json& j, const std::string& where) {
  try {
    return j.get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

double get_number(const json& j, const std::string& where) {
  if (!j.is_number()) throw ConfigError(where + ": expected a number");
  return j.get<double>();
}

std::size_t get_count(const json& j, const std::string& where) {
  if (!j.is_number_integer() || j.get<long long>() < 0) throw ConfigError(where + ": expected a non-negative integer");
  return j.get<std::size_t>();
}

int get_int(const json& j, const std::string& where) {
  if (!j.is_number_integer()) throw ConfigError(where + ": expected an integer");
  return j.get<int>();
}

std::uint64_t get_seed(const json& j, const std::string& where) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
    throw ConfigError(where + ": expected a non-negative integer seed");
  return j.get<std::uint64_t>();
}

Interval get_range(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) throw ConfigError(where + ": expected [min, max]");
  return {get_number(j[0], where + "[0]"), get_number(j[1], where + "[1]")};
}

Prior prior_from(const json& j, const std::string& where) {
  check_keys(j, where, {"dist", "a", "b", "shape", "rate", "scale"});
  if (!j.contains("dist")) throw ConfigError(where + ": missing 'dist'");
  const auto dist = get<std::string>(j["dist"], where + "/dist");
  // Constructor errors carry no location; prefix it here.
  auto build = [&](auto make) {
    try {
      return make();
    } catch (const Error& e) {
      throw ConfigError(where + ": " + e.what());
    }
  };
  if (dist == "uniform" || dist == "beta") {
    if (!j.contains("a") || !j.contains("b")) throw ConfigError(where + ": " + dist + " prior needs 'a' and 'b'");
    const double a = get_number(j["a"], where + "/a");
    const double b = get_number(j["b"], where + "/b");
    return build([&] { return dist == "uniform" ? Prior::uniform(a, b) : Prior::beta(a, b); });
  }
  if (dist == "gamma") {
    if (!j.contains("shape") || j.contains("rate") == j.contains("scale"))
      throw ConfigError(where + ": gamma prior needs 'shape' and exactly one of 'rate' or 'scale'");
    const double shape = get_number(j["shape"], where + "/shape");
    const double rate = j.contains("rate") ? get_number(j["rate"], where + "/rate")
                                           : 1.0 / get_number(j["scale"], where + "/scale");
    return build([&] { return Prior::gamma(shape, rate); });
  }
  throw ConfigError(where + ": unknown prior '" + dist + "' (expected uniform, beta or gamma)");
}

std::filesystem::path resolve_path(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

ModelConfig model_from(const json& j, const std::filesystem::path& base, const std::string& where) {
  check_keys(j, where,
             {"grid", "strength", "form", "framework", "susceptibility", "covariate", "kernel_offset", "alarm",
              "parameters"});
  ModelConfig m;
  if (j.contains("grid")) {
    const auto label = get<std::string>(j["grid"], where + "/grid");
    try {
      m.spec = grid_spec(label);
      ModelParams values;
      if (j.contains("strength")) {
        const auto strength = strength_from_string(get<std::string>(j["strength"], where + "/strength"));
        values = label == "Base" ? baseline_scenario(2.4, 2.0).params : grid_scenario(label, strength).params;
      }
      for (const auto& [name, prior] : default_priors(m.spec)) m.parameters[name] = {values.get(name), false, prior, {}};
    } catch (const Error& e) {
      throw ConfigError(where + "/grid: " + e.what());
    }
  } else if (j.contains("strength")) {
    throw ConfigError(where + ": 'strength' needs 'grid'");
  }

  try {
    if (j.contains("form")) {
      m.spec.form = model_form_from_string(get<std::string>(j["form"], where + "/form"));
      if (m.spec.form == ModelForm::Baseline) m.spec.alarm.reset();
    }
    if (j.contains("framework")) m.spec.framework = framework_from_string(get<std::string>(j["framework"], where));
  } catch (const ConfigError& e) {
    throw ConfigError(where + ": " + e.what());
  }
  if (j.contains("susceptibility")) {
    const auto s = get<std::string>(j["susceptibility"], where + "/susceptibility");
    if (s == "constant") m.spec.susceptibility = SusceptibilityKind::Constant;
    else if (s == "binary") m.spec.susceptibility = SusceptibilityKind::BinaryCovariate;
    else throw ConfigError(where + "/susceptibility: expected 'constant' or 'binary'");
  }
  if (j.contains("covariate")) m.spec.covariate = get<std::string>(j["covariate"], where + "/covariate");
  if (j.contains("kernel_offset")) m.spec.kernel_offset = get_number(j["kernel_offset"], where + "/kernel_offset");

  if (j.contains("alarm")) {
    const auto& a = j["alarm"];
    const std::string aw = where + "/alarm";
    check_keys(a, aw, {"family", "signal", "series", "window", "presmoothed", "proportion"});
    AlarmSpec alarm = m.spec.alarm.value_or(AlarmSpec{});
    try {
      if (a.contains("family")) alarm.family = alarm_family_from_string(get<std::string>(a["family"], aw));
      if (a.contains("signal")) alarm.signal.kind = signal_kind_from_string(get<std::string>(a["signal"], aw));
    } catch (const ConfigError& e) {
      throw ConfigError(aw + ": " + e.what());
    }
    if (a.contains("proportion")) alarm.signal.external_is_proportion = get<bool>(a["proportion"], aw + "/proportion");
    if (alarm.signal.kind == SignalKind::External) {
      if (!a.contains("series")) throw ConfigError(aw + ": external signal needs 'series' (a t,value CSV)");
      const auto file = resolve_path(base, get<std::string>(a["series"], aw + "/series"));
      if (!std::filesystem::exists(file)) throw IoError(aw + "/series: file not found: " + file.string());
      const int window = a.contains("window") ? get_int(a["window"], aw + "/window") : 1;
      const bool pre = a.contains("presmoothed") && get<bool>(a["presmoothed"], aw + "/presmoothed");
      alarm.signal.series = load_external_series(file.string(), window, pre);
    }
    m.spec.alarm = alarm;
    if (m.spec.form == ModelForm::Baseline) throw ConfigError(where + ": an alarm needs form A or B");
  }

  if (j.contains("parameters")) {
    const auto& ps = j["parameters"];
    if (!ps.is_object()) throw ConfigError(where + "/parameters: expected an object");
    for (const auto& item : ps.items()) {
      const std::string pw = where + "/parameters/" + item.key();
      const auto& names = all_parameter_names();
      if (std::find(names.begin(), names.end(), item.key()) == names.end())
        throw ConfigError(pw + ": unknown parameter");
      ParameterEntry& e = m.parameters[item.key()];
      const auto& v = item.value();
      if (v.is_number()) {
        e.value = v.get<double>();
        e.fixed = true;
        e.prior.reset();
        continue;
      }
      check_keys(v, pw, {"value", "prior", "fixed", "init"});
      if (v.contains("value")) e.value = get_number(v["value"], pw + "/value");
      if (v.contains("prior")) e.prior = prior_from(v["prior"], pw + "/prior");
      if (v.contains("fixed")) e.fixed = get<bool>(v["fixed"], pw + "/fixed");
      if (v.contains("init")) e.init = get_number(v["init"], pw + "/init");
    }
  }
  if (!m.parameters.count("epsilon")) m.parameters["epsilon"] = {0.0, true, {}, {}};
  try {
    m.spec.validate();
    m.validate();
  } catch (const UnsupportedError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(where + ": " + e.what());
  }
  return m;
}

}  // namespace

ModelParams ModelConfig::values() const {
  ModelParams p;
  for (const auto& [name, e] : parameters) p.set(name, e.value);
  return p;
}

PriorSpec ModelConfig::priors() const {
  PriorSpec out;
  for (const auto& name : spec.parameter_names()) {
    const auto& e = parameters.at(name);
    if (!e.fixed) out.emplace_back(name, *e.prior);
  }
  return out;
}

std::vector<double> ModelConfig::initial_values() const {
  std::vector<double> out;
  for (const auto& name : spec.parameter_names()) {
    const auto& e = parameters.at(name);
    if (!e.fixed) out.push_back(e.init ? *e.init : e.prior->median());
  }
  return out;
}

void ModelConfig::validate() const {
  const auto used = spec.parameter_names();
  for (const auto& name : used)
    if (!parameters.count(name)) throw ConfigError("parameter '" + name + "' is required by this model");
  for (const auto& [name, e] : parameters) {
    if (name == "epsilon") {
      if (!e.fixed || e.prior) throw UnsupportedError("epsilon can only be fixed; fitting it is not supported");
      if (!(e.value >= 0.0)) throw ConfigError("epsilon must be non-negative");
      continue;
    }
    if (std::find(used.begin(), used.end(), name) == used.end())
      throw ConfigError("parameter '" + name + "' is not used by this model");
    if (!e.fixed && !e.prior) throw ConfigError("free parameter '" + name + "' has no prior");
    if (!e.fixed && e.init && !e.prior->in_support(*e.init))
      throw ConfigError("initial value of '" + name + "' lies outside its prior support");
  }
}

std::filesystem::path RunConfig::resolve(const std::filesystem::path& p) const {
  return p.is_absolute() ? p : base_dir / p;
}

RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  check_keys(j, "config",
             {"seed", "output", "threads", "population", "data", "model", "periods", "simulation", "mcmc",
              "screening", "analysis", "compare", "study"});
  RunConfig c;
  c.base_dir = base_dir;
  c.canonical = j.dump();
  c.hash = fnv1a_hex(c.canonical);

  if (j.contains("seed")) c.seed = get_seed(j["seed"], "seed");
  if (j.contains("output")) c.output = resolve_path(base_dir, get<std::string>(j["output"], "output"));
  if (j.contains("threads")) c.threads = std::max<std::size_t>(1, get_count(j["threads"], "threads"));

  if (j.contains("population")) {
    const auto& p = j["population"];
    check_keys(p, "population", {"file", "generate", "min_distance"});
    if (p.contains("file") == p.contains("generate"))
      throw ConfigError("population: give exactly one of 'file' or 'generate'");
    if (p.contains("file")) {
      c.population.file = resolve_path(base_dir, get<std::string>(p["file"], "population/file"));
    } else {
      const auto& g = p["generate"];
      check_keys(g, "population/generate", {"n", "x_range", "y_range"});
      if (g.contains("n")) c.population.n = get_count(g["n"], "population/generate/n");
      if (g.contains("x_range")) c.population.x_range = get_range(g["x_range"], "population/generate/x_range");
      if (g.contains("y_range")) c.population.y_range = get_range(g["y_range"], "population/generate/y_range");
      if (c.population.n < 1) throw ConfigError("population/generate/n must be at least 1");
      if (!(c.population.x_range.min < c.population.x_range.max) ||
          !(c.population.y_range.min < c.population.y_range.max))
        throw ConfigError("population/generate: ranges need min < max");
    }
    if (p.contains("min_distance")) c.population.min_distance = get_number(p["min_distance"], "population/min_distance");
  }

  if (j.contains("data")) {
    const auto& d = j["data"];
    check_keys(d, "data", {"events", "chain", "t_min", "t_max"});
    if (d.contains("events")) c.events = resolve_path(base_dir, get<std::string>(d["events"], "data/events"));
    if (d.contains("chain")) c.chain = resolve_path(base_dir, get<std::string>(d["chain"], "data/chain"));
    if (d.contains("t_min")) c.data_t_min = get_int(d["t_min"], "data/t_min");
    if (d.contains("t_max")) c.data_t_max = get_int(d["t_max"], "data/t_max");
  }

  if (j.contains("periods")) {
    const auto& p = j["periods"];
    check_keys(p, "periods", {"infectious", "exposed", "removal_overrides"});
    if (p.contains("infectious")) c.periods.infectious_period = get_int(p["infectious"], "periods/infectious");
    if (p.contains("exposed") && !p["exposed"].is_null())
      c.periods.exposed_period = get_int(p["exposed"], "periods/exposed");
    if (p.contains("removal_overrides")) {
      const auto& o = p["removal_overrides"];
      if (!o.is_object()) throw ConfigError("periods/removal_overrides: expected {\"id\": time}");
      for (const auto& item : o.items()) {
        std::size_t id = 0;
        try {
          id = static_cast<std::size_t>(std::stoull(item.key()));
        } catch (const std::exception&) {
          throw ConfigError("periods/removal_overrides: '" + item.key() + "' is not an individual id");
        }
        c.periods.removal_overrides[id] = get_int(item.value(), "periods/removal_overrides/" + item.key());
      }
    }
  }

  if (j.contains("model")) c.model = model_from(j["model"], base_dir, "model");
  else c.model = model_from(json::object({{"grid", "Base"}}), base_dir, "model");
  try {
    c.periods.validate(c.model.spec.framework);
  } catch (const Error& e) {
    throw ConfigError(std::string("periods: ") + e.what());
  }

  c.simulation.periods = c.periods;
  c.simulation.rng_seed = c.seed;
  if (j.contains("simulation")) {
    const auto& s = j["simulation"];
    check_keys(s, "simulation", {"t_max", "t_min", "n_seeds", "seeds", "replicates"});
    if (s.contains("t_max")) c.simulation.t_max = get_int(s["t_max"], "simulation/t_max");
    if (s.contains("t_min")) c.simulation.t_min = get_int(s["t_min"], "simulation/t_min");
    if (s.contains("n_seeds")) c.simulation.n_seeds = get_count(s["n_seeds"], "simulation/n_seeds");
    if (s.contains("seeds")) c.simulation.seeds = get<std::vector<std::size_t>>(s["seeds"], "simulation/seeds");
    if (s.contains("replicates")) c.replicates = get_count(s["replicates"], "simulation/replicates");
    if (c.simulation.t_max < 1) throw ConfigError("simulation/t_max must be at least 1");
    if (c.simulation.seeds.empty() && c.simulation.n_seeds < 1)
      throw ConfigError("simulation/n_seeds must be at least 1");
    if (c.replicates < 1) throw ConfigError("simulation/replicates must be at least 1");
  }
  if (!j.contains("data") || !j["data"].contains("t_min")) c.data_t_min = c.simulation.t_min;

  c.mcmc.rng_seed = derive_seed(c.seed, 101);
  if (j.contains("mcmc")) {
    const auto& m = j["mcmc"];
    check_keys(m, "mcmc", {"iterations", "burn_in", "seed", "target_acceptance", "adapt"});
    if (m.contains("iterations")) c.mcmc.iterations = get_count(m["iterations"], "mcmc/iterations");
    if (m.contains("burn_in")) c.mcmc.burn_in = get_count(m["burn_in"], "mcmc/burn_in");
    if (m.contains("seed")) c.mcmc.rng_seed = get_seed(m["seed"], "mcmc/seed");
    if (m.contains("target_acceptance"))
      c.mcmc.target_acceptance = get_number(m["target_acceptance"], "mcmc/target_acceptance");
    if (m.contains("adapt")) c.mcmc.adapt = get<bool>(m["adapt"], "mcmc/adapt");
  }
  c.mcmc.initial_values = c.model.initial_values();
  try {
    c.mcmc.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("mcmc: ") + e.what());
  }

  c.screening.rng_seed = derive_seed(c.seed, 102);
  c.screening.target_acceptance = c.mcmc.target_acceptance;
  for (const auto& [name, e] : c.model.parameters)
    if (!e.fixed && e.init) c.screening.initial_values[name] = *e.init;
  if (j.contains("screening")) {
    const auto& s = j["screening"];
    check_keys(s, "screening",
               {"iterations", "final_iterations", "threshold", "warmup_fraction", "final_burn_in_fraction", "pi",
                "seed", "initial_indicator"});
    if (s.contains("iterations")) c.screening.iterations = get_count(s["iterations"], "screening/iterations");
    if (s.contains("final_iterations"))
      c.screening.final_iterations = get_count(s["final_iterations"], "screening/final_iterations");
    if (s.contains("threshold")) c.screening.threshold = get_number(s["threshold"], "screening/threshold");
    if (s.contains("warmup_fraction"))
      c.screening.warmup_fraction = get_number(s["warmup_fraction"], "screening/warmup_fraction");
    if (s.contains("final_burn_in_fraction"))
      c.screening.final_burn_in_fraction = get_number(s["final_burn_in_fraction"], "screening/final_burn_in_fraction");
    if (s.contains("seed")) c.screening.rng_seed = get_seed(s["seed"], "screening/seed");
    if (s.contains("initial_indicator"))
      c.screening.initial_indicator = get<bool>(s["initial_indicator"], "screening/initial_indicator");
    if (s.contains("pi")) {
      const auto& pi = s["pi"];
      if (pi.is_number()) {
        c.screening.fixed_pi = pi.get<double>();
      } else {
        check_keys(pi, "screening/pi", {"a", "b"});
        if (pi.contains("a")) c.screening.pi_a = get_number(pi["a"], "screening/pi/a");
        if (pi.contains("b")) c.screening.pi_b = get_number(pi["b"], "screening/pi/b");
      }
    }
    try {
      c.screening.validate();
    } catch (const ConfigError& e) {
      throw ConfigError(std::string("screening: ") + e.what());
    }
  }

  if (j.contains("analysis")) {
    const auto& a = j["analysis"];
    check_keys(a, "analysis", {"n_draws", "t_cut", "horizon", "waic_max_draws"});
    if (a.contains("n_draws")) c.analysis.n_draws = get_count(a["n_draws"], "analysis/n_draws");
    if (a.contains("t_cut")) c.analysis.t_cut = get_int(a["t_cut"], "analysis/t_cut");
    if (a.contains("horizon")) c.analysis.horizon = get_int(a["horizon"], "analysis/horizon");
    if (a.contains("waic_max_draws")) c.analysis.waic_max_draws = get_count(a["waic_max_draws"], "analysis/waic_max_draws");
    if (c.analysis.n_draws < 1) throw ConfigError("analysis/n_draws must be at least 1");
    if (c.analysis.waic_max_draws < 2) throw ConfigError("analysis/waic_max_draws must be at least 2");
  }

  if (j.contains("compare")) {
    const auto& list = j["compare"];
    if (!list.is_array()) throw ConfigError("compare: expected a list of models");
    for (std::size_t k = 0; k < list.size(); ++k) {
      const std::string w = "compare[" + std::to_string(k) + "]";
      const auto& e = list[k];
      check_keys(e, w, {"label", "chain", "model", "burn_in"});
      CompareEntry entry;
      if (!e.contains("chain")) throw ConfigError(w + ": missing 'chain'");
      entry.chain = resolve_path(base_dir, get<std::string>(e["chain"], w + "/chain"));
      if (e.contains("model")) {
        entry.model = model_from(e["model"], base_dir, w + "/model");
      } else if (e.contains("label")) {
        entry.model = model_from(json::object({{"grid", e["label"]}}), base_dir, w);
      } else {
        throw ConfigError(w + ": needs 'label' (grid model) or 'model'");
      }
      entry.label = e.contains("label") ? get<std::string>(e["label"], w + "/label") : grid_label(entry.model.spec);
      if (e.contains("burn_in")) entry.burn_in = get_count(e["burn_in"], w + "/burn_in");
      c.compare.push_back(std::move(entry));
    }
  }

  if (j.contains("study")) {
    const auto& s = j["study"];
    check_keys(s, "study",
               {"mode", "true_models", "strength", "fit_models", "screen_models", "replicates", "baseline_alpha",
                "baseline_beta", "initial"});
    if (s.contains("mode")) c.study.mode = get<std::string>(s["mode"], "study/mode");
    if (c.study.mode != "waic" && c.study.mode != "screen")
      throw ConfigError("study/mode: expected 'waic' or 'screen'");
    if (s.contains("true_models")) c.study.true_models = get<std::vector<std::string>>(s["true_models"], "study");
    if (s.contains("strength"))
      c.study.strength = strength_from_string(get<std::string>(s["strength"], "study/strength"));
    if (s.contains("fit_models")) c.study.fit_models = get<std::vector<std::string>>(s["fit_models"], "study");
    if (s.contains("screen_models"))
      c.study.screen_models = get<std::vector<std::string>>(s["screen_models"], "study");
    if (s.contains("replicates")) c.study.replicates = get_count(s["replicates"], "study/replicates");
    if (s.contains("baseline_alpha")) c.study.baseline_alpha = get_number(s["baseline_alpha"], "study/baseline_alpha");
    if (s.contains("baseline_beta")) c.study.baseline_beta = get_number(s["baseline_beta"], "study/baseline_beta");
    if (s.contains("initial")) {
      c.study.initial.clear();
      const auto& init = s["initial"];
      if (!init.is_object()) throw ConfigError("study/initial: expected {\"parameter\": value}");
      for (const auto& item : init.items()) c.study.initial[item.key()] = get_number(item.value(), "study/initial");
    }
    if (c.study.fit_models.empty()) c.study.fit_models = model_grid_labels();
    for (const auto& l : c.study.true_models)
      if (l != "none") grid_spec(l);
    for (const auto& l : c.study.fit_models) grid_spec(l);
    for (const auto& l : c.study.screen_models) {
      const auto spec = grid_spec(l);
      if (!spec.alarm) throw ConfigError("study/screen_models: '" + l + "' has no alarm to screen");
      if (spec.alarm->family == AlarmFamily::Hill)
        throw UnsupportedError("spike-and-slab screening does not support the Hill alarm");
    }
    if (c.study.replicates < 1) throw ConfigError("study/replicates must be at least 1");
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path());
}

ModelConfig parse_model(const std::string& json_text, const std::filesystem::path& base_dir) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("model block is not valid JSON: ") + e.what());
  }
  return model_from(j, base_dir, "model");
}

Prior parse_prior(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("prior is not valid JSON: ") + e.what());
  }
  return prior_from(j, "prior");
}

}  // namespace bcilm
