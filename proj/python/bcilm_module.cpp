// Python bindings for the core library. Heavy calls release the GIL.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "bcilm/analysis.hpp"
#include "bcilm/commands.hpp"
#include "bcilm/error.hpp"
#include "bcilm/inference.hpp"
#include "bcilm/scenarios.hpp"
#include "bcilm/screening.hpp"
#include "bcilm/simulate.hpp"

namespace py = pybind11;
using namespace bcilm;

namespace {

ModelParams params_from(const py::dict& d) {
  ModelParams p;
  for (const auto& item : d) p.set(py::cast<std::string>(item.first), py::cast<double>(item.second));
  return p;
}

PriorSpec priors_from(const ModelSpec& spec, const std::optional<py::dict>& d) {
  if (!d) return default_priors(spec);
  PriorSpec out;
  for (const auto& item : *d) out.emplace_back(py::cast<std::string>(item.first), py::cast<Prior>(item.second));
  return out;
}

py::dict to_dict(const ModelParams& p) {
  py::dict d;
  for (const auto& name : all_parameter_names()) d[py::str(name)] = p.get(name);
  return d;
}

}  // namespace

PYBIND11_MODULE(_bcilm, m) {
  m.doc() = "Spatial individual-level epidemic models with behavioural-change alarms";
  m.attr("__version__") = BCILM_VERSION_STRING;

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<RangeError>(m, "RangeError", PyExc_IndexError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<UnsupportedError>(m, "UnsupportedError", PyExc_NotImplementedError);
  py::register_exception<InitializationError>(m, "InitializationError", PyExc_RuntimeError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  py::class_<Population>(m, "Population")
      .def("__len__", &Population::size)
      .def_property_readonly("x", [](const Population& p) {
        std::vector<double> v;
        for (const auto& ind : p.individuals()) v.push_back(ind.x);
        return v;
      })
      .def_property_readonly("y", [](const Population& p) {
        std::vector<double> v;
        for (const auto& ind : p.individuals()) v.push_back(ind.y);
        return v;
      })
      .def_property_readonly("covariate_names", &Population::covariate_names)
      .def("distance", &Population::distance, py::arg("i"), py::arg("j"))
      .def("min_distance", &Population::min_distance)
      .def("save", [](const Population& p, const std::filesystem::path& path) { save_population(p, path); });

  m.def("generate_population",
        [](std::size_t n, std::pair<double, double> xr, std::pair<double, double> yr, std::uint64_t seed) {
          return generate_population(n, {xr.first, xr.second}, {yr.first, yr.second}, seed);
        },
        py::arg("n"), py::arg("x_range"), py::arg("y_range"), py::arg("seed"));
  m.def("load_population", &load_population, py::arg("path"));

  py::class_<EpidemicHistory>(m, "EpidemicHistory")
      .def("__len__", &EpidemicHistory::size)
      .def_property_readonly("t_min", &EpidemicHistory::t_min)
      .def_property_readonly("t_max", &EpidemicHistory::t_max)
      .def_property_readonly("framework", [](const EpidemicHistory& h) { return to_string(h.framework()); })
      .def("epidemic_curve", &EpidemicHistory::epidemic_curve)
      .def("event_time", &EpidemicHistory::event_time, py::arg("i"))
      .def("state", [](const EpidemicHistory& h, std::size_t i, int t) { return std::string(1, to_char(h.state_of(i, t))); },
           py::arg("i"), py::arg("t"))
      .def("ever_infected", &EpidemicHistory::ever_infected)
      .def("truncated", &EpidemicHistory::truncated, py::arg("t_cut"))
      .def("save", [](const EpidemicHistory& h, const std::filesystem::path& path) { save_events(h, path); });

  m.def("load_events",
        [](const std::filesystem::path& path, const std::string& framework, int t_min, int t_max) {
          return load_events(path, framework_from_string(framework), t_min, t_max);
        },
        py::arg("path"), py::arg("framework"), py::arg("t_min"), py::arg("t_max"));

  py::class_<ModelSpec>(m, "ModelSpec")
      .def_property_readonly("label", [](const ModelSpec& s) { return grid_label(s); })
      .def_property_readonly("form", [](const ModelSpec& s) { return to_string(s.form); })
      .def_property_readonly("parameter_names", &ModelSpec::parameter_names)
      .def("__repr__", [](const ModelSpec& s) { return "<ModelSpec " + grid_label(s) + ">"; });
  m.def("grid_spec", &grid_spec, py::arg("label"),
        "Spec of a grid model: 'Base' or '<1-4><A|B>'.");
  m.def("grid_scenario",
        [](const std::string& label, const std::string& strength) {
          const auto sc = grid_scenario(label, strength_from_string(strength));
          return py::make_tuple(sc.spec, to_dict(sc.params));
        },
        py::arg("label"), py::arg("strength"), "(spec, params) of a simulation-study scenario.");

  py::class_<Prior>(m, "Prior")
      .def_static("uniform", &Prior::uniform, py::arg("lo"), py::arg("hi"))
      .def_static("beta", &Prior::beta, py::arg("a"), py::arg("b"))
      .def_static("gamma", &Prior::gamma, py::arg("shape"), py::arg("rate"))
      .def("median", &Prior::median)
      .def("__repr__", &Prior::describe);
  m.def("default_priors", [](const ModelSpec& s) {
    py::dict d;
    for (const auto& [name, prior] : default_priors(s)) d[py::str(name)] = prior;
    return d;
  });

  m.def("simulate",
        [](const ModelSpec& spec, const Population& pop, const py::dict& params, int t_max, std::size_t n_seeds,
           std::uint64_t seed, int infectious_period) {
          SimulationConfig cfg;
          cfg.t_max = t_max;
          cfg.n_seeds = n_seeds;
          cfg.rng_seed = seed;
          cfg.periods.infectious_period = infectious_period;
          const auto p = params_from(params);
          py::gil_scoped_release nogil;
          return simulate_epidemic(spec, pop, p, cfg);
        },
        py::arg("spec"), py::arg("population"), py::arg("params"), py::arg("t_max") = 30, py::arg("n_seeds") = 3,
        py::arg("seed") = 1, py::arg("infectious_period") = 3);

  m.def("log_likelihood",
        [](const ModelSpec& spec, const Population& pop, const EpidemicHistory& h, const py::dict& params) {
          return log_likelihood(spec, pop, h, params_from(params));
        },
        py::arg("spec"), py::arg("population"), py::arg("history"), py::arg("params"));
  m.def("infection_probability",
        [](const ModelSpec& spec, const Population& pop, const EpidemicHistory& h, const py::dict& params,
           std::size_t i, int t) { return infection_probability(spec, pop, h, params_from(params), i, t); },
        py::arg("spec"), py::arg("population"), py::arg("history"), py::arg("params"), py::arg("i"), py::arg("t"));

  py::class_<PosteriorSample>(m, "PosteriorSample")
      .def_readonly("names", &PosteriorSample::names)
      .def_readonly("burn_in", &PosteriorSample::burn_in)
      .def_readonly("acceptance_rate", &PosteriorSample::acceptance_rate)
      .def_readonly("warnings", &PosteriorSample::warnings)
      .def_property_readonly("iterations", &PosteriorSample::iterations)
      .def("column", [](const PosteriorSample& s, const std::string& name) {
        const auto k = s.index_of(name);
        if (!k) throw ConfigError("no sampled parameter '" + name + "'");
        return s.column(*k);
      }, py::arg("name"), "Post burn-in draws of one parameter.")
      .def("summary", [](const PosteriorSample& s) {
        py::dict d;
        for (const auto& p : posterior_summary(s)) {
          py::dict row;
          row["median"] = p.median;
          row["hpdi"] = py::make_tuple(p.hpd.lower, p.hpd.upper);
          row["acceptance_rate"] = p.acceptance_rate;
          row["geweke_z"] = p.geweke.z;
          d[py::str(p.name)] = row;
        }
        return d;
      });

  m.def("fit",
        [](const ModelSpec& spec, const Population& pop, const EpidemicHistory& h, std::optional<py::dict> priors,
           std::optional<py::dict> initial, std::optional<py::dict> fixed, std::size_t iterations,
           std::optional<std::size_t> burn_in, std::uint64_t seed) {
          MCMCConfig cfg;
          cfg.iterations = iterations;
          cfg.burn_in = burn_in.value_or(iterations / 10);
          cfg.rng_seed = seed;
          const auto ps = priors_from(spec, priors);
          const ModelParams init = initial ? params_from(*initial) : ModelParams{};
          for (const auto& [name, prior] : ps)
            cfg.initial_values.push_back(initial && initial->contains(name) ? init.get(name) : prior.median());
          const ModelParams fx = fixed ? params_from(*fixed) : ModelParams{};
          py::gil_scoped_release nogil;
          return fit(spec, pop, h, fx, ps, cfg);
        },
        py::arg("spec"), py::arg("population"), py::arg("history"), py::arg("priors") = py::none(),
        py::arg("initial") = py::none(), py::arg("fixed") = py::none(), py::arg("iterations") = 10000,
        py::arg("burn_in") = py::none(), py::arg("seed") = 1,
        "Component-wise adaptive random-walk Metropolis. Priors default to the simulation-study priors.");

  m.def("screen",
        [](const ModelSpec& spec, const Population& pop, const EpidemicHistory& h, std::optional<py::dict> priors,
           std::optional<py::dict> initial, std::size_t iterations, std::uint64_t seed) {
          SpikeSlabConfig cfg;
          cfg.iterations = iterations;
          cfg.rng_seed = seed;
          if (initial)
            for (const auto& item : *initial)
              cfg.initial_values[py::cast<std::string>(item.first)] = py::cast<double>(item.second);
          const auto ps = priors_from(spec, priors);
          ScreeningResult r;
          {
            py::gil_scoped_release nogil;
            r = screen(spec, pop, h, ModelParams{}, ps, cfg);
          }
          py::dict d;
          d["inclusion_probability"] = r.inclusion_probability;
          d["bc_selected"] = r.bc_selected;
          d["medians"] = to_dict(r.medians);
          return d;
        },
        py::arg("spec"), py::arg("population"), py::arg("history"), py::arg("priors") = py::none(),
        py::arg("initial") = py::none(), py::arg("iterations") = 25000, py::arg("seed") = 1,
        "Spike-and-slab screening of the alarm parameters of a type A/B model.");

  py::class_<WaicEntry>(m, "WaicEntry")
      .def_readonly("model", &WaicEntry::model)
      .def_readonly("lppd", &WaicEntry::lppd)
      .def_readonly("p_waic", &WaicEntry::p_waic)
      .def_readonly("waic", &WaicEntry::waic)
      .def_readonly("n_points", &WaicEntry::n_points);
  m.def("waic",
        [](const ModelSpec& spec, const Population& pop, const EpidemicHistory& h, const PosteriorSample& post,
           std::size_t max_draws) {
          py::gil_scoped_release nogil;
          return waic(spec, pop, h, post, grid_label(spec), max_draws);
        },
        py::arg("spec"), py::arg("population"), py::arg("history"), py::arg("posterior"),
        py::arg("max_draws") = 1000);

  py::class_<CurveBand>(m, "CurveBand")
      .def_readonly("t", &CurveBand::t)
      .def_readonly("lower", &CurveBand::lower)
      .def_readonly("median", &CurveBand::median)
      .def_readonly("upper", &CurveBand::upper)
      .def("coverage", &CurveBand::coverage, py::arg("observed"));
  m.def("ppd_curve",
        [](const ModelSpec& spec, const Population& pop, const EpidemicHistory& h, const PosteriorSample& post,
           std::size_t n_draws, std::uint64_t seed, int infectious_period) {
          PeriodSpec periods;
          periods.infectious_period = infectious_period;
          py::gil_scoped_release nogil;
          return ppd_curve(spec, pop, periods, h, post, n_draws, seed);
        },
        py::arg("spec"), py::arg("population"), py::arg("history"), py::arg("posterior"), py::arg("n_draws") = 100,
        py::arg("seed") = 1, py::arg("infectious_period") = 3);

  m.def("hpdi",
        [](std::vector<double> x, double mass) {
          const auto h = hpdi(x, mass);
          return py::make_tuple(h.lower, h.upper);
        },
        py::arg("samples"), py::arg("mass") = 0.95);
  m.def("geweke", [](std::vector<double> x) { return geweke_diagnostic(x).z; }, py::arg("chain"));

  m.def("run_command",
        [](const std::string& name, const std::filesystem::path& config, std::optional<std::filesystem::path> out,
           std::optional<std::uint64_t> seed, std::optional<std::size_t> threads, bool then_fit) {
          CommandOptions opts;
          opts.config = config;
          opts.out = out;
          opts.seed = seed;
          opts.threads = threads;
          opts.then_fit = then_fit;
          std::ostringstream o, e;
          int code;
          {
            py::gil_scoped_release nogil;
            code = run_command(name, opts, o, e);
          }
          return py::make_tuple(code, o.str(), e.str());
        },
        py::arg("command"), py::arg("config"), py::arg("out") = py::none(), py::arg("seed") = py::none(),
        py::arg("threads") = py::none(), py::arg("then_fit") = false,
        "Runs a CLI command in-process; returns (exit_code, stdout, stderr).");
}
