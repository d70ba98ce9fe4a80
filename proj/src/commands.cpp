#include "bcilm/commands.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <ostream>

#include <json.hpp>

#include "bcilm/analysis.hpp"
#include "bcilm/config.hpp"
#include "bcilm/csv.hpp"
#include "bcilm/error.hpp"
#include "bcilm/output.hpp"
#include "bcilm/parallel.hpp"

namespace bcilm {

namespace {

namespace fs = std::filesystem;

RunConfig load_run(const CommandOptions& opts) {
  if (opts.config.empty()) throw ConfigError("--config is required");
  RunConfig c = load_config(opts.config);
  if (opts.seed) {
    c.seed = *opts.seed;
    c.simulation.rng_seed = c.seed;
    c.mcmc.rng_seed = derive_seed(c.seed, 101);
    c.screening.rng_seed = derive_seed(c.seed, 102);
  }
  if (opts.out) c.output = *opts.out;
  if (opts.threads) c.threads = std::max<std::size_t>(1, *opts.threads);
  if (opts.n_draws) c.analysis.n_draws = *opts.n_draws;
  if (opts.t_cut) c.analysis.t_cut = *opts.t_cut;
  if (opts.horizon) c.analysis.horizon = *opts.horizon;
  return c;
}

/// Output directory plus the manifest describing it.
class OutputDir {
 public:
  OutputDir(const RunConfig& c, std::string command) : dir_(c.output) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec || !fs::is_directory(dir_)) throw IoError("cannot create output directory " + dir_.string());
    manifest_.command = std::move(command);
    manifest_.version = version_string();
    manifest_.config_hash = c.hash;
    manifest_.seeds["master"] = c.seed;
  }

  void write(const std::string& name, const std::string& content) {
    const fs::path path = dir_ / name;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    csv::write_file(path, content);
    manifest_.outputs[name] = fnv1a_hex(content);
  }

  Manifest& manifest() { return manifest_; }
  const fs::path& dir() const { return dir_; }
  void finish() { csv::write_file(dir_ / "manifest.json", manifest_.to_json()); }

 private:
  fs::path dir_;
  Manifest manifest_;
};

fs::path require_file(const std::optional<fs::path>& flag, const std::optional<fs::path>& from_config,
                      const std::string& what) {
  const auto p = flag ? flag : from_config;
  if (!p) throw ConfigError("no " + what + " file given (use the command-line flag or the config)");
  if (!fs::exists(*p)) throw IoError(what + " file not found: " + p->string());
  return *p;
}

Population prepare_population(Population pop, const RunConfig& c) {
  if (c.population.min_distance) return rescale_min_distance(pop, *c.population.min_distance);
  return pop;
}

struct Data {
  fs::path population_file;
  fs::path events_file;
  Population population;
  EpidemicHistory history;
};

Data load_data(const CommandOptions& opts, const RunConfig& c) {
  Data d;
  d.population_file = require_file(opts.population, c.population.file, "population");
  d.events_file = require_file(opts.events, c.events, "events");
  d.population = prepare_population(load_population(d.population_file), c);
  d.history = load_events(d.events_file, c.model.spec.framework, c.data_t_min, c.events_t_max());
  if (d.history.size() != d.population.size())
    throw ConfigError("events file covers " + std::to_string(d.history.size()) +
                      " individuals but the population has " + std::to_string(d.population.size()));
  return d;
}

void record_inputs(Manifest& m, const Data& d) {
  m.inputs["population"] = file_hash(d.population_file);
  m.inputs["events"] = file_hash(d.events_file);
}

/// Checks that a chain was produced from the same population and events.
void check_chain_inputs(const fs::path& chain, const Data& d) {
  const auto m = Manifest::load(chain.parent_path().empty() ? fs::path(".") : chain.parent_path());
  if (!m) return;
  for (const char* key : {"population", "events"}) {
    const auto it = m->inputs.find(key);
    if (it == m->inputs.end()) continue;
    const std::string actual = file_hash(key == std::string("population") ? d.population_file : d.events_file);
    if (it->second != actual)
      throw ConfigError(std::string("chain ") + chain.string() + " was fitted to a different " + key +
                        " file (manifest hash " + it->second + ", given " + actual + ")");
  }
}

std::optional<std::string> manifest_info(const fs::path& chain, const std::string& key) {
  const auto m = Manifest::load(chain.parent_path().empty() ? fs::path(".") : chain.parent_path());
  if (!m) return std::nullopt;
  const auto it = m->info.find(key);
  if (it == m->info.end()) return std::nullopt;
  return it->second;
}

struct LoadedChain {
  ModelSpec spec;
  PosteriorSample posterior;
};

/// Loads a chain for the configured model. A chain whose manifest says the
/// baseline was selected (screen --then-fit) is paired with the baseline.
LoadedChain load_chain_for(const fs::path& path, const ModelConfig& model, std::optional<std::size_t> burn_in,
                           std::size_t default_burn_in) {
  std::size_t b = default_burn_in;
  if (burn_in) {
    b = *burn_in;
  } else if (const auto info = manifest_info(path, "burn_in")) {
    b = static_cast<std::size_t>(std::stoull(*info));
  }
  LoadedChain out{model.spec, read_chain(path, b, model.values())};
  std::vector<std::string> expected;
  for (const auto& p : model.priors()) expected.push_back(p.first);
  if (out.posterior.names != expected) {
    const auto selected = manifest_info(path, "model");
    if (selected && *selected == "Base" && model.spec.alarm) {
      out.spec.form = ModelForm::Baseline;
      out.spec.alarm.reset();
      out.posterior.fixed.delta1 = 0.0;
      out.posterior.fixed.delta2 = 0.0;
      return out;
    }
    std::string got, want;
    for (const auto& n : out.posterior.names) got += (got.empty() ? "" : ",") + n;
    for (const auto& n : expected) want += (want.empty() ? "" : ",") + n;
    throw ConfigError("chain " + path.string() + " has parameters [" + got + "] but the model expects [" + want + "]");
  }
  return out;
}

void print_summary(std::ostream& out, const std::vector<ParameterSummary>& summary) {
  out << std::left << std::setw(10) << "parameter" << std::setw(14) << "median" << std::setw(28) << "95% HPDI"
      << std::setw(12) << "accept" << "geweke_z\n";
  for (const auto& s : summary) {
    std::ostringstream hpd;
    hpd << "[" << s.hpd.lower << ", " << s.hpd.upper << "]";
    out << std::left << std::setw(10) << s.name << std::setw(14) << s.median << std::setw(28) << hpd.str()
        << std::setw(12) << s.acceptance_rate << (s.geweke.stuck ? std::string("stuck") : csv::format(s.geweke.z))
        << "\n";
  }
}

void write_fit_outputs(OutputDir& dir, const PosteriorSample& posterior, std::ostream& out, std::ostream& err) {
  const auto summary = posterior_summary(posterior);
  dir.write("chain.csv", chain_csv(posterior));
  dir.write("summary.csv", summary_csv(summary));
  dir.write("geweke.csv", geweke_csv(posterior));
  dir.manifest().info["burn_in"] = std::to_string(posterior.burn_in);
  dir.manifest().info["iterations"] = std::to_string(posterior.iterations());
  print_summary(out, summary);
  for (const auto& w : posterior.warnings) err << "warning: " << w << "\n";
}

std::string curves_csv(const std::vector<std::vector<int>>& curves, int t_first) {
  std::string s = "replicate";
  const std::size_t len = curves.empty() ? 0 : curves.front().size();
  for (std::size_t k = 0; k < len; ++k) s += ",t" + std::to_string(t_first + static_cast<int>(k));
  s += "\n";
  for (std::size_t r = 0; r < curves.size(); ++r) {
    s += std::to_string(r + 1);
    for (int v : curves[r]) s += "," + std::to_string(v);
    s += "\n";
  }
  return s;
}

std::string replicate_dir(std::size_t k) {
  std::ostringstream s;
  s << "rep_" << std::setw(3) << std::setfill('0') << k + 1;
  return s.str();
}

int guarded(const std::function<int()>& body, std::ostream& err) {
  try {
    return body();
  } catch (const UnsupportedError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUnsupported;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace

int cmd_simulate(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(
      [&] {
        const RunConfig c = load_run(opts);
        const ModelParams params = c.model.values();
        if (!c.model.spec.in_support(params, c.model.spec.has_alarm())) {
          std::string vals;
          for (const auto& name : c.model.spec.parameter_names())
            vals += (vals.empty() ? "" : ", ") + name + "=" + csv::format(params.get(name));
          throw ConfigError("model parameter values lie outside their admissible region (" + vals +
                            "); grid models need 'strength' or explicit values to simulate");
        }
        OutputDir dir(c, "simulate");
        PopulationGenerator make_pop;
        std::optional<Population> fixed_pop;
        if (opts.population || c.population.file) {
          const auto file = require_file(opts.population, c.population.file, "population");
          fixed_pop = prepare_population(load_population(file), c);
          dir.manifest().inputs["population"] = file_hash(file);
          make_pop = [&](std::uint64_t) { return *fixed_pop; };
        } else {
          make_pop = [&](std::uint64_t seed) {
            return prepare_population(
                generate_population(c.population.n, c.population.x_range, c.population.y_range, seed), c);
          };
        }
        const auto reps = simulate_batch(c.model.spec, make_pop, params, c.simulation, c.replicates, c.threads);

        std::vector<std::vector<int>> curves;
        std::string sizes = "replicate,final_size,final_size_excluding_seeds,seeds\n";
        for (std::size_t k = 0; k < reps.size(); ++k) {
          const std::string sub = replicate_dir(k);
          const fs::path pop_tmp = dir.dir() / sub / "population.csv";
          fs::create_directories(pop_tmp.parent_path());
          save_population(reps[k].population, pop_tmp);
          dir.manifest().outputs[sub + "/population.csv"] = file_hash(pop_tmp);
          save_events(reps[k].history, dir.dir() / sub / "events.csv");
          dir.manifest().outputs[sub + "/events.csv"] = file_hash(dir.dir() / sub / "events.csv");
          dir.manifest().seeds[sub + "/population"] = derive_seed(c.simulation.rng_seed, 2 * k);
          dir.manifest().seeds[sub + "/epidemic"] = derive_seed(c.simulation.rng_seed, 2 * k + 1);
          curves.push_back(reps[k].history.epidemic_curve());
          const auto total = reps[k].history.ever_infected();
          const auto seeds = reps[k].history.seed_count();
          sizes += std::to_string(k + 1) + "," + std::to_string(total) + "," + std::to_string(total - seeds) + "," +
                   std::to_string(seeds) + "\n";
        }
        dir.write("curves.csv", curves_csv(curves, c.simulation.t_min));
        dir.write("sizes.csv", sizes);
        dir.manifest().info["model"] = grid_label(c.model.spec);
        dir.manifest().info["t_min"] = std::to_string(c.simulation.t_min);
        dir.manifest().info["t_max"] = std::to_string(c.simulation.t_min + c.simulation.t_max);
        dir.finish();
        out << "simulated " << reps.size() << " epidemic(s) into " << dir.dir().string() << "\n";
        return kExitOk;
      },
      err);
}

int cmd_fit(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(
      [&] {
        const RunConfig c = load_run(opts);
        Data d = load_data(opts, c);
        const PriorSpec priors = c.model.priors();
        if (priors.empty()) throw ConfigError("model has no free parameters to fit");
        OutputDir dir(c, "fit");
        record_inputs(dir.manifest(), d);
        if (opts.truncate_at) {
          d.history = d.history.truncated(*opts.truncate_at);
          dir.manifest().info["truncated_at"] = std::to_string(*opts.truncate_at);
        }
        const auto posterior = fit(c.model.spec, d.population, d.history, c.model.values(), priors, c.mcmc);
        dir.manifest().seeds["mcmc"] = c.mcmc.rng_seed;
        dir.manifest().info["model"] = grid_label(c.model.spec);
        write_fit_outputs(dir, posterior, out, err);
        dir.finish();
        return kExitOk;
      },
      err);
}

int cmd_screen(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(
      [&] {
        const RunConfig c = load_run(opts);
        if (c.model.spec.alarm && c.model.spec.alarm->family == AlarmFamily::Hill)
          throw UnsupportedError("spike-and-slab screening does not support the Hill alarm (no exact-zero form)");
        const Data d = load_data(opts, c);
        OutputDir dir(c, opts.then_fit ? "screen --then-fit" : "screen");
        record_inputs(dir.manifest(), d);
        dir.manifest().seeds["screening"] = c.screening.rng_seed;

        ScreeningResult res;
        std::optional<ScreenThenFitResult> full;
        if (opts.then_fit) {
          full = screen_then_fit(c.model.spec, d.population, d.history, c.model.values(), c.model.priors(),
                                 c.screening);
          res = full->screening;
        } else {
          res = screen(c.model.spec, d.population, d.history, c.model.values(), c.model.priors(), c.screening);
        }

        nlohmann::json report;
        report["inclusion_probability"] = res.inclusion_probability;
        report["selected"] = res.bc_selected ? "BC-ILM" : "Baseline";
        report["threshold"] = res.threshold;
        report["iterations"] = res.chain.iterations();
        report["warmup"] = res.chain.burn_in;
        report["model"] = grid_label(c.model.spec);
        for (const auto& name : res.chain.names) report["medians"][name] = res.medians.get(name);
        report["warnings"] = res.chain.warnings;
        dir.write("screening.json", report.dump(2) + "\n");
        std::string ind = "iteration,z,pi\n";
        for (std::size_t k = 0; k < res.indicator.size(); ++k)
          ind += std::to_string(k + 1) + "," + std::to_string(res.indicator[k]) + "," + csv::format(res.pi[k]) + "\n";
        dir.write("indicator.csv", ind);
        dir.write("screening_chain.csv", chain_csv(res.chain));

        out << "inclusion probability: " << res.inclusion_probability << "\n"
            << "selected: " << (res.bc_selected ? "BC-ILM" : "Baseline") << "\n";
        for (const auto& w : res.chain.warnings) err << "warning: " << w << "\n";
        if (full) {
          dir.manifest().seeds["mcmc"] = derive_seed(c.screening.rng_seed, 1);
          dir.manifest().info["model"] = grid_label(full->selected);
          write_fit_outputs(dir, full->posterior, out, err);
        }
        dir.finish();
        return kExitOk;
      },
      err);
}

namespace {

int run_band(const CommandOptions& opts, std::ostream& out, std::ostream& err, bool forecast) {
  return guarded(
      [&] {
        const RunConfig c = load_run(opts);
        const Data d = load_data(opts, c);
        const fs::path chain = require_file(opts.chain, c.chain, "chain");
        check_chain_inputs(chain, d);
        const LoadedChain lc = load_chain_for(chain, c.model, std::nullopt, c.mcmc.burn_in);
        OutputDir dir(c, forecast ? "forecast" : "ppd");
        record_inputs(dir.manifest(), d);
        dir.manifest().inputs["chain"] = file_hash(chain);
        const std::uint64_t seed = derive_seed(c.seed, forecast ? 202 : 201);
        dir.manifest().seeds["resimulation"] = seed;

        CurveBand band;
        std::vector<int> obs_t, obs;
        if (forecast) {
          const int t_cut = c.analysis.t_cut;
          if (const auto trunc = manifest_info(chain, "truncated_at"); trunc && std::stoi(*trunc) != t_cut)
            err << "warning: chain was fitted to data truncated at " << *trunc << ", forecasting from " << t_cut
                << "\n";
          band = forecast_curve(lc.spec, d.population, c.periods, d.history, lc.posterior, t_cut, c.analysis.horizon,
                                c.analysis.n_draws, seed, c.threads);
          for (int t = t_cut + 1; t <= c.analysis.horizon && t < d.history.t_max(); ++t) {
            obs_t.push_back(t);
            obs.push_back(static_cast<int>(d.history.new_infections(t).size()));
          }
          dir.manifest().info["t_cut"] = std::to_string(t_cut);
          dir.manifest().info["horizon"] = std::to_string(c.analysis.horizon);
        } else {
          band = ppd_curve(lc.spec, d.population, c.periods, d.history, lc.posterior, c.analysis.n_draws, seed,
                           c.threads);
          obs = d.history.epidemic_curve();
          for (std::size_t k = 0; k < obs.size(); ++k) obs_t.push_back(d.history.t_min() + static_cast<int>(k));
        }
        dir.manifest().info["model"] = grid_label(lc.spec);
        dir.manifest().info["n_draws"] = std::to_string(band.n_draws);
        dir.write("band.csv", band_csv(band));
        const std::string title = std::string(forecast ? "Forecast" : "Posterior predictive") + " epidemic curve (" +
                                  grid_label(lc.spec) + ")";
        dir.write("band.svg", band_svg(band, obs_t, obs, title));
        dir.finish();

        std::size_t in = 0, n = 0;
        for (std::size_t k = 0; k < obs_t.size(); ++k) {
          const auto pos = static_cast<std::size_t>(obs_t[k] - band.t.front());
          ++n;
          in += (obs[k] >= band.lower[pos] && obs[k] <= band.upper[pos]) ? 1 : 0;
        }
        out << "band over t=" << band.t.front() << ".." << band.t.back() << " from " << band.n_draws << " draws";
        if (n > 0) out << "; observed curve inside the 95% band at " << in << "/" << n << " time points";
        out << "\n";
        return kExitOk;
      },
      err);
}

}  // namespace

int cmd_ppd(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  return run_band(opts, out, err, false);
}

int cmd_forecast(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(
      [&] {
        const RunConfig c = load_run(opts);
        if (c.analysis.horizon <= c.analysis.t_cut)
          throw ConfigError("forecast horizon " + std::to_string(c.analysis.horizon) + " must be after t_cut " +
                            std::to_string(c.analysis.t_cut));
        return run_band(opts, out, err, true);
      },
      err);
}

namespace {

std::string grid_row(const std::vector<std::string>& labels, const std::function<std::string(const std::string&)>& cell) {
  std::string s;
  for (const auto& l : model_grid_labels())
    if (std::find(labels.begin(), labels.end(), l) != labels.end()) s += "," + cell(l);
  return s;
}

std::string grid_header(const std::string& first, const std::vector<std::string>& labels) {
  return first + grid_row(labels, [](const std::string& l) { return l; }) + "\n";
}

}  // namespace

int cmd_compare(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(
      [&] {
        const RunConfig c = load_run(opts);
        if (c.compare.empty()) throw ConfigError("compare needs a 'compare' list of fitted models");
        const Data d = load_data(opts, c);
        OutputDir dir(c, "compare");
        record_inputs(dir.manifest(), d);
        std::vector<WaicEntry> entries;
        for (const auto& e : c.compare) {
          if (!fs::exists(e.chain)) throw IoError("chain file not found: " + e.chain.string());
          check_chain_inputs(e.chain, d);
          const LoadedChain lc = load_chain_for(e.chain, e.model, e.burn_in, c.mcmc.burn_in);
          dir.manifest().inputs["chain:" + e.label] = file_hash(e.chain);
          entries.push_back(waic(lc.spec, d.population, d.history, lc.posterior, e.label, c.analysis.waic_max_draws,
                                 c.threads));
        }
        const WaicReport report = compare_models(entries);
        dir.write("waic.csv", report.to_csv());

        std::vector<std::string> labels;
        for (const auto& e : report.entries) labels.push_back(e.model);
        std::map<std::string, std::size_t> index;
        for (std::size_t k = 0; k < labels.size(); ++k) index[labels[k]] = k;
        std::string grid = grid_header("row", labels);
        grid += "waic" + grid_row(labels, [&](const std::string& l) {
          return csv::format(report.entries[index[l]].waic);
        }) + "\n";
        grid += "delta_vs_best" + grid_row(labels, [&](const std::string& l) {
          return csv::format(report.delta(index[l], report.best));
        }) + "\n";
        grid += "selected" + grid_row(labels, [&](const std::string& l) {
          return std::string(index[l] == report.best ? "1" : "0");
        }) + "\n";
        dir.write("waic_grid.csv", grid);
        dir.manifest().info["pointwise_unit"] = report.pointwise_unit;
        dir.finish();
        for (std::size_t k = 0; k < report.entries.size(); ++k)
          out << std::left << std::setw(8) << report.entries[k].model << " waic " << report.entries[k].waic
              << "  delta " << report.delta(k, report.best) << (k == report.best ? "  <- best" : "") << "\n";
        return kExitOk;
      },
      err);
}

namespace {

struct StudyCell {
  std::string true_model;
  std::size_t replicate = 0;
  bool ok = false;
  std::string error;
  std::map<std::string, double> waic;           // waic mode
  std::map<std::string, bool> correct;          // screen mode
  std::map<std::string, double> inclusion;      // screen mode
};

Scenario study_scenario(const StudyConfig& s, const std::string& label) {
  if (label == "none") return baseline_scenario(s.baseline_alpha, s.baseline_beta);
  return grid_scenario(label, s.strength);
}

}  // namespace

int cmd_study(const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(
      [&] {
        const RunConfig c = load_run(opts);
        const StudyConfig& s = c.study;
        OutputDir dir(c, "study");
        const std::size_t n_cells = s.true_models.size() * s.replicates;
        std::vector<StudyCell> cells(n_cells);

        parallel_for(n_cells, c.threads, [&](std::size_t idx) {
          StudyCell& cell = cells[idx];
          cell.true_model = s.true_models[idx / s.replicates];
          cell.replicate = idx % s.replicates + 1;
          try {
            const Scenario sc = study_scenario(s, cell.true_model);
            Population pop = prepare_population(generate_population(c.population.n, c.population.x_range,
                                                                    c.population.y_range, derive_seed(c.seed, 2 * idx)),
                                                c);
            SimulationConfig sim = c.simulation;
            sim.rng_seed = derive_seed(c.seed, 2 * idx + 1);
            const EpidemicHistory h = simulate_epidemic(sc.spec, pop, sc.params, sim);
            if (s.mode == "waic") {
              for (std::size_t m = 0; m < s.fit_models.size(); ++m) {
                const ModelSpec spec = grid_spec(s.fit_models[m]);
                const PriorSpec priors = default_priors(spec);
                MCMCConfig mc = c.mcmc;
                mc.rng_seed = derive_seed(c.seed, 1'000'000 + idx * 64 + m);
                mc.initial_values.clear();
                for (const auto& [name, prior] : priors) {
                  const auto it = s.initial.find(name);
                  mc.initial_values.push_back(it != s.initial.end() ? it->second : prior.median());
                }
                const auto post = fit(spec, pop, h, ModelParams{}, priors, mc);
                cell.waic[s.fit_models[m]] =
                    waic(spec, pop, h, post, s.fit_models[m], c.analysis.waic_max_draws).waic;
              }
            } else {
              for (std::size_t m = 0; m < s.screen_models.size(); ++m) {
                const ModelSpec spec = grid_spec(s.screen_models[m]);
                SpikeSlabConfig sc_cfg = c.screening;
                sc_cfg.rng_seed = derive_seed(c.seed, 2'000'000 + idx * 64 + m);
                const auto priors = default_priors(spec);
                sc_cfg.initial_values.clear();
                for (const auto& [name, value] : s.initial)
                  if (std::any_of(priors.begin(), priors.end(), [&](const auto& p) { return p.first == name; }))
                    sc_cfg.initial_values[name] = value;
                const auto res = screen(spec, pop, h, ModelParams{}, priors, sc_cfg);
                cell.inclusion[s.screen_models[m]] = res.inclusion_probability;
                cell.correct[s.screen_models[m]] = (cell.true_model == "none") != res.bc_selected;
              }
            }
            cell.ok = true;
          } catch (const std::exception& e) {
            cell.ok = false;
            cell.error = e.what();
          }
        });

        std::string cells_csv;
        std::size_t failed = 0;
        if (s.mode == "waic") {
          cells_csv = "true_model,replicate,status" + grid_row(s.fit_models, [](const std::string& l) { return l; }) +
                      ",selected\n";
          for (const auto& cell : cells) {
            cells_csv += cell.true_model + "," + std::to_string(cell.replicate) + "," + (cell.ok ? "ok" : "failed");
            std::string best;
            if (cell.ok) {
              for (const auto& l : model_grid_labels())
                if (cell.waic.count(l) && (best.empty() || cell.waic.at(l) < cell.waic.at(best))) best = l;
            }
            cells_csv += grid_row(s.fit_models, [&](const std::string& l) {
              return cell.ok ? csv::format(cell.waic.at(l)) : std::string("NA");
            });
            cells_csv += "," + (cell.ok ? best : std::string("NA")) + "\n";
            if (!cell.ok) {
              ++failed;
              err << "warning: study cell " << cell.true_model << " replicate " << cell.replicate
                  << " failed: " << cell.error << "\n";
            }
          }
          std::string selection = grid_header("true_model", s.fit_models);
          std::string delta = grid_header("true_model", s.fit_models);
          for (const auto& tm : s.true_models) {
            std::map<std::string, std::size_t> wins;
            std::map<std::string, double> delta_sum;
            std::size_t ok = 0;
            for (const auto& cell : cells) {
              if (cell.true_model != tm || !cell.ok) continue;
              ++ok;
              std::string best;
              for (const auto& l : model_grid_labels())
                if (cell.waic.count(l) && (best.empty() || cell.waic.at(l) < cell.waic.at(best))) best = l;
              ++wins[best];
              if (cell.waic.count(tm))
                for (const auto& [l, w] : cell.waic) delta_sum[l] += w - cell.waic.at(tm);
            }
            selection += tm + grid_row(s.fit_models, [&](const std::string& l) {
              return ok ? csv::format(static_cast<double>(wins[l]) / static_cast<double>(ok)) : std::string("NA");
            }) + "\n";
            delta += tm + grid_row(s.fit_models, [&](const std::string& l) {
              if (l == tm) return std::string("-");
              if (!ok || !delta_sum.count(l)) return std::string("NA");
              return csv::format(delta_sum[l] / static_cast<double>(ok));
            }) + "\n";
          }
          dir.write("selection.csv", selection);
          dir.write("mean_delta_waic.csv", delta);
          out << selection;
        } else {
          cells_csv = "true_model,replicate,status";
          for (const auto& l : s.screen_models) cells_csv += "," + l + "_inclusion," + l + "_correct";
          cells_csv += "\n";
          for (const auto& cell : cells) {
            cells_csv += cell.true_model + "," + std::to_string(cell.replicate) + "," + (cell.ok ? "ok" : "failed");
            for (const auto& l : s.screen_models)
              cells_csv += cell.ok ? "," + csv::format(cell.inclusion.at(l)) + "," + (cell.correct.at(l) ? "1" : "0")
                                   : std::string(",NA,NA");
            cells_csv += "\n";
            if (!cell.ok) {
              ++failed;
              err << "warning: study cell " << cell.true_model << " replicate " << cell.replicate
                  << " failed: " << cell.error << "\n";
            }
          }
          std::string table = "scenario";
          for (const auto& l : s.screen_models) table += "," + l;
          table += "\n";
          for (const auto& tm : s.true_models) {
            table += tm;
            for (const auto& l : s.screen_models) {
              std::size_t ok = 0, right = 0;
              for (const auto& cell : cells)
                if (cell.true_model == tm && cell.ok) {
                  ++ok;
                  right += cell.correct.at(l) ? 1 : 0;
                }
              table += "," + (ok ? csv::format(static_cast<double>(right) / static_cast<double>(ok)) : "NA");
            }
            table += "\n";
          }
          dir.write("screen_selection.csv", table);
          out << table;
        }
        dir.write("cells.csv", cells_csv);
        dir.manifest().info["mode"] = s.mode;
        dir.manifest().info["failed_cells"] = std::to_string(failed);
        dir.finish();
        return kExitOk;
      },
      err);
}

int run_command(const std::string& name, const CommandOptions& opts, std::ostream& out, std::ostream& err) {
  if (name == "simulate") return cmd_simulate(opts, out, err);
  if (name == "fit") return cmd_fit(opts, out, err);
  if (name == "screen") return cmd_screen(opts, out, err);
  if (name == "ppd") return cmd_ppd(opts, out, err);
  if (name == "forecast") return cmd_forecast(opts, out, err);
  if (name == "compare") return cmd_compare(opts, out, err);
  if (name == "study") return cmd_study(opts, out, err);
  err << "error: unknown command '" << name << "'\n";
  return kExitConfig;
}

}  // namespace bcilm
