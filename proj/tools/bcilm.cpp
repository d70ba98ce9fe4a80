#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "bcilm/commands.hpp"
#include "bcilm/output.hpp"

namespace {

struct Flags {
  std::string config;
  std::uint64_t seed = 0;
  std::string out;
  std::size_t threads = 0;
  std::string population;
  std::string events;
  std::string chain;
  int truncate_at = 0;
  int t_cut = 0;
  int horizon = 0;
  std::size_t n_draws = 0;
  bool then_fit = false;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spatial individual-level epidemic models with behavioural-change alarms"};
  app.set_version_flag("--version", bcilm::version_string());
  app.require_subcommand(1);
  Flags f;

  // Global flags, accepted before or after the command name.
  auto* config = app.add_option("-c,--config", f.config, "JSON run configuration")->check(CLI::ExistingFile);
  auto* seed = app.add_option("--seed", f.seed, "master RNG seed (overrides the config)");
  auto* out = app.add_option("-o,--out", f.out, "output directory (overrides the config)");
  auto* threads = app.add_option("-j,--threads", f.threads, "worker threads")->check(CLI::PositiveNumber);
  for (auto* o : {config, seed, out, threads}) o->configurable(false);
  app.fallthrough();

  auto data_flags = [&](CLI::App* cmd) {
    cmd->add_option("--population", f.population, "population CSV (id,x,y[,covariates])");
    cmd->add_option("--events", f.events, "events CSV (id,exposure_time,infection_time,removal_time)");
  };

  auto* simulate = app.add_subcommand("simulate", "simulate epidemics");
  simulate->add_option("--population", f.population, "use this population instead of generating one");
  auto* fit = app.add_subcommand("fit", "fit a model by adaptive random-walk Metropolis-Hastings");
  data_flags(fit);
  auto* truncate = fit->add_option("--truncate-at", f.truncate_at, "fit only events up to this time");
  auto* screen = app.add_subcommand("screen", "spike-and-slab behavioural-change screening");
  data_flags(screen);
  screen->add_flag("--then-fit", f.then_fit, "fit the selected model class afterwards");
  auto* ppd = app.add_subcommand("ppd", "posterior predictive epidemic curve band");
  data_flags(ppd);
  auto* forecast = app.add_subcommand("forecast", "forecast band after a truncation time");
  data_flags(forecast);
  auto* t_cut = forecast->add_option("--t-cut", f.t_cut, "last observed time");
  auto* horizon = forecast->add_option("--horizon", f.horizon, "last forecast time");
  std::vector<CLI::Option*> draws;
  for (auto* cmd : {ppd, forecast}) {
    cmd->add_option("--chain", f.chain, "chain CSV written by fit");
    draws.push_back(cmd->add_option("--draws", f.n_draws, "posterior draws to resimulate"));
  }
  auto* compare = app.add_subcommand("compare", "WAIC comparison of fitted models");
  data_flags(compare);
  app.add_subcommand("study", "simulation study over a scenario grid");

  CLI11_PARSE(app, argc, argv);

  bcilm::CommandOptions opts;
  if (config->count() == 0) {
    std::cerr << "error: --config is required\n";
    return bcilm::kExitConfig;
  }
  opts.config = f.config;
  if (seed->count()) opts.seed = f.seed;
  if (out->count()) opts.out = f.out;
  if (threads->count()) opts.threads = f.threads;
  if (!f.population.empty()) opts.population = f.population;
  if (!f.events.empty()) opts.events = f.events;
  if (!f.chain.empty()) opts.chain = f.chain;
  if (truncate->count()) opts.truncate_at = f.truncate_at;
  if (t_cut->count()) opts.t_cut = f.t_cut;
  if (horizon->count()) opts.horizon = f.horizon;
  for (auto* d : draws)
    if (d->count()) opts.n_draws = f.n_draws;
  opts.then_fit = f.then_fit;

  const std::string name = app.get_subcommands().front()->get_name();
  return bcilm::run_command(name, opts, std::cout, std::cerr);
}
