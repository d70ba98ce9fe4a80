// Acceptance suite. Prints one PASS/FAIL line per criterion, with indented
// detail lines underneath. Usage: bcilm_acceptance [criterion ...]

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "../instances.hpp"
#include "../oracle.hpp"
#include "bcilm/analysis.hpp"
#include "bcilm/inference.hpp"
#include "bcilm/scenarios.hpp"
#include "bcilm/screening.hpp"
#include "bcilm/simulate.hpp"

namespace fs = std::filesystem;
using namespace bcilm;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = false;
  std::string summary;
  std::vector<std::string> details;
};

std::string fmt(double x, int prec = 4) {
  std::ostringstream s;
  s << std::setprecision(prec) << x;
  return s.str();
}

// Desk scale: n = 500 on a region of half the paper's area keeps the paper's
// population density (1000 individuals on 200 x 200).
constexpr std::size_t kDeskN = 500;
const Interval kDeskRange{100.0, 100.0 + 100.0 * std::sqrt(2.0)};

Population desk_population(std::uint64_t seed) { return generate_population(kDeskN, kDeskRange, kDeskRange, seed); }

SimulationConfig paper_simulation(std::uint64_t seed) {
  SimulationConfig cfg;
  cfg.t_max = 30;
  cfg.n_seeds = 3;
  cfg.rng_seed = seed;
  cfg.periods.infectious_period = 3;
  return cfg;
}

std::vector<Replicate> desk_replicates(const Scenario& sc, std::size_t m, std::uint64_t seed) {
  return simulate_batch(sc.spec, desk_population, sc.params, paper_simulation(seed), m);
}

// Study initial values: alpha = beta = 1, alarm parameters at prior medians.
MCMCConfig desk_mcmc(const PriorSpec& priors, std::size_t iterations, std::uint64_t seed) {
  MCMCConfig m;
  m.iterations = iterations;
  m.burn_in = iterations / 10;
  m.rng_seed = seed;
  for (const auto& [name, prior] : priors)
    m.initial_values.push_back(name == "alpha" || name == "beta" ? 1.0 : prior.median());
  return m;
}

std::size_t env_count(const char* name, std::size_t fallback) {
  const char* v = std::getenv(name);
  return v ? static_cast<std::size_t>(std::stoul(v)) : fallback;
}

// ---------------------------------------------------------------------------

Outcome criterion1() {
  const auto t0 = Clock::now();
  Rng rng(2024);
  std::size_t instances = 0, terms = 0, mismatches = 0;
  double max_diff = 0.0;
  std::set<std::string> combos;
  for (int k = 0; k < 1300; ++k) {
    const auto in = instances::make(7, k);
    const auto p = instances::params(in, rng);
    const double got = log_likelihood(in.spec, in.pop, in.history, p);
    const auto expect_terms = oracle::terms(in.spec, in.pop, in.history, p);
    double want = 0.0;
    for (double v : expect_terms) want += v;
    const auto got_terms = pointwise_log_terms(in.spec, in.pop, in.history, p);
    bool ok = got_terms.size() == expect_terms.size();
    for (std::size_t q = 0; ok && q < got_terms.size(); ++q)
      if (!(got_terms[q] == expect_terms[q] || std::abs(got_terms[q] - expect_terms[q]) <= 1e-9)) ok = false;
    if (got != want) {
      const double d = std::abs(got - want);
      if (!(d <= 1e-9)) ok = false;
      else max_diff = std::max(max_diff, d);
    }
    mismatches += ok ? 0 : 1;
    ++instances;
    terms += expect_terms.size();
    combos.insert(to_string(in.spec.form) + (in.spec.alarm ? "/" + to_string(in.spec.alarm->family) : ""));
  }
  const double secs = seconds_since(t0);
  Outcome o;
  o.pass = mismatches == 0 && instances >= 100 && combos.size() == 9 && secs < 10.0;
  o.summary = std::to_string(instances - mismatches) + "/" + std::to_string(instances) +
              " instances match the brute-force oracle within 1e-9 (max |diff| " + fmt(max_diff, 3) + ", " +
              fmt(secs, 3) + " s)";
  o.details.push_back(std::to_string(terms) + " Bernoulli terms over " + std::to_string(combos.size()) +
                      " form/alarm combinations, n <= 8, T <= 5");
  return o;
}

Outcome criterion2() {
  const auto t0 = Clock::now();
  std::vector<std::string> bad;
  for (double d1 : {0.05, 0.075, 0.1, 0.3})
    for (double d2 : {0.5, 1.0, 3.0, 7.5})
      if (alarm_value(AlarmFamily::Hill, d1, d2, d1) != 0.5) bad.push_back("Hill(" + fmt(d1) + "," + fmt(d2) + ")");
  const double asym = alarm_value(AlarmFamily::ScaledExponential, 0.03, 0.8, 1e6);
  if (!(std::abs(asym - 0.8) < 1e-6)) bad.push_back("scaled-exponential asymptote " + fmt(asym, 17));
  if (alarm_value(AlarmFamily::Threshold, 0.65, 40, 40) != 0.0) bad.push_back("threshold at delta2");
  if (alarm_value(AlarmFamily::Threshold, 0.65, 40, 41) != 0.65) bad.push_back("threshold above delta2");
  if (alarm_value(AlarmFamily::Threshold, 0.65, 40, std::nextafter(40.0, 100.0)) != 0.65)
    bad.push_back("threshold just above delta2");

  // delta1 = 0 reduction, tiny instances plus one desk-scale epidemic.
  std::size_t reductions = 0;
  Rng rng(5);
  for (int k = 0; k < 390; ++k) {
    const auto in = instances::make(11, k);
    if (!in.spec.alarm || in.spec.alarm->family == AlarmFamily::Hill) continue;
    auto p = instances::params(in, rng);
    p.delta1 = 0.0;
    ModelSpec base = in.spec;
    base.form = ModelForm::Baseline;
    base.alarm.reset();
    if (log_likelihood(in.spec, in.pop, in.history, p) != log_likelihood(base, in.pop, in.history, p))
      bad.push_back("delta1 = 0 reduction, " + in.label);
    ++reductions;
  }
  const auto rep = desk_replicates(grid_scenario("1A", Strength::Medium), 1, 99).front();
  for (const char* label : {"1A", "1B", "2A", "2B", "3A", "3B"}) {
    auto sc = grid_scenario(label, Strength::Medium);
    sc.params.delta1 = 0.0;
    const auto base = grid_spec("Base");
    if (log_likelihood(sc.spec, rep.population, rep.history, sc.params) !=
        log_likelihood(base, rep.population, rep.history, sc.params))
      bad.push_back(std::string("delta1 = 0 reduction, desk-scale ") + label);
    ++reductions;
  }
  const double secs = seconds_since(t0);
  Outcome o;
  o.pass = bad.empty() && secs < 1.0;
  o.summary = "Hill(delta1) = 0.5 exactly, scaled-exponential asymptote |a - 0.8| = " + fmt(std::abs(asym - 0.8), 3) +
              ", strict threshold, delta1 = 0 bit-equal to Baseline in " + std::to_string(reductions) + " cases (" +
              fmt(secs, 3) + " s)";
  o.details = bad;
  return o;
}

Outcome criterion3() {
  const auto t0 = Clock::now();
  const std::size_t m = env_count("BCILM_ACC_C3_REPS", 20);
  const auto bc = grid_scenario("1A", Strength::Medium);
  const auto base = baseline_scenario(bc.params.alpha, bc.params.beta);
  // Same master seed: replicate k of both arms shares population and seeds.
  const auto a = desk_replicates(bc, m, 303);
  const auto b = desk_replicates(base, m, 303);
  auto stats = [](const std::vector<Replicate>& reps) {
    double s = 0, s2 = 0;
    for (const auto& r : reps) s += static_cast<double>(r.history.ever_infected());
    const double mean = s / reps.size();
    for (const auto& r : reps) s2 += std::pow(r.history.ever_infected() - mean, 2);
    return std::pair{mean, s2 / (reps.size() - 1)};
  };
  const auto [mb, vb] = stats(a);
  const auto [m0, v0] = stats(b);
  const double pooled_sd = std::sqrt(((m - 1) * vb + (m - 1) * v0) / (2.0 * m - 2));
  const double se = pooled_sd * std::sqrt(2.0 / m);
  const double secs = seconds_since(t0);
  Outcome o;
  o.pass = mb < m0 && (m0 - mb) > 2 * se && secs < 300;
  o.summary = "mean epidemic size 1A medium " + fmt(mb) + " vs no BC " + fmt(m0) + ", difference " + fmt(m0 - mb) +
              " = " + fmt((m0 - mb) / se, 3) + " pooled SE (" + fmt(secs, 3) + " s)";
  o.details.push_back(std::to_string(m) + " matched replicates per arm, n = 500, sd " + fmt(std::sqrt(vb)) + " / " +
                      fmt(std::sqrt(v0)));
  return o;
}

Outcome criterion4() {
  const auto t0 = Clock::now();
  const std::size_t m = env_count("BCILM_ACC_C4_REPS", 10);
  const std::size_t iters = env_count("BCILM_ACC_C4_ITERS", 25000);
  const auto sc = grid_scenario("2A", Strength::Medium);
  const auto reps = desk_replicates(sc, m, 404);
  const auto priors = default_priors(sc.spec);
  std::size_t cover_alpha = 0, cover_delta = 0, cover_beta = 0;
  Outcome o;
  for (std::size_t k = 0; k < m; ++k) {
    const auto post = fit(sc.spec, reps[k].population, reps[k].history, {}, priors,
                          desk_mcmc(priors, iters, derive_seed(404, 1000 + k)));
    const auto s = posterior_summary(post);
    const bool ca = s[0].hpd.contains(sc.params.alpha), cb = s[1].hpd.contains(sc.params.beta),
               cd = s[2].hpd.contains(sc.params.delta1);
    cover_alpha += ca;
    cover_beta += cb;
    cover_delta += cd;
    std::ostringstream line;
    line << "rep " << k + 1 << ": size " << reps[k].history.ever_infected();
    for (const auto& p : s)
      line << ", " << p.name << " " << fmt(p.median, 3) << " [" << fmt(p.hpd.lower, 3) << ", " << fmt(p.hpd.upper, 3)
           << "] z=" << fmt(p.geweke.z, 2);
    o.details.push_back(line.str());
  }
  const double secs = seconds_since(t0);
  o.pass = cover_alpha >= 7 * m / 10.0 && cover_delta >= 7 * m / 10.0 && secs < 3600;
  o.summary = "95% HPDI covers delta1 in " + std::to_string(cover_delta) + "/" + std::to_string(m) + ", alpha in " +
              std::to_string(cover_alpha) + "/" + std::to_string(m) + " (beta, not asserted: " +
              std::to_string(cover_beta) + "/" + std::to_string(m) + "; " + std::to_string(iters) + " iterations, " +
              fmt(secs, 4) + " s)";
  return o;
}

Outcome criterion5() {
  const auto t0 = Clock::now();
  const std::size_t m = env_count("BCILM_ACC_C5_REPS", 5);
  const std::size_t iters = env_count("BCILM_ACC_C5_ITERS", 20000);
  const auto sc = grid_scenario("4A", Strength::Medium);
  const auto reps = desk_replicates(sc, m, 505);
  std::size_t positive = 0;
  Outcome o;
  for (std::size_t k = 0; k < m; ++k) {
    std::map<std::string, double> w;
    for (const char* label : {"Base", "4A"}) {
      const auto spec = grid_spec(label);
      const auto priors = default_priors(spec);
      const auto post = fit(spec, reps[k].population, reps[k].history, {}, priors,
                            desk_mcmc(priors, iters, derive_seed(505, 1000 + 2 * k + (spec.has_alarm() ? 1 : 0))));
      w[label] = waic(spec, reps[k].population, reps[k].history, post, label).waic;
    }
    const double gap = w["Base"] - w["4A"];
    positive += gap > 0 ? 1 : 0;
    o.details.push_back("rep " + std::to_string(k + 1) + ": size " + std::to_string(reps[k].history.ever_infected()) +
                        ", WAIC Base " + fmt(w["Base"], 6) + ", 4A " + fmt(w["4A"], 6) + ", gap " + fmt(gap, 4));
  }
  const double secs = seconds_since(t0);
  o.pass = positive >= 4 * m / 5.0 && secs < 7200;
  o.summary = "WAIC(Base) - WAIC(4A) > 0 in " + std::to_string(positive) + "/" + std::to_string(m) +
              " medium-BC datasets (" + std::to_string(iters) + " iterations, " + fmt(secs, 4) + " s)";
  return o;
}

Outcome criterion6() {
  const auto t0 = Clock::now();
  const std::size_t m = env_count("BCILM_ACC_C6_REPS", 20);
  const std::size_t iters = env_count("BCILM_ACC_C6_ITERS", 10000);
  SpikeSlabConfig cfg;
  cfg.iterations = iters;
  cfg.initial_values = {{"alpha", 1.0}, {"beta", 1.0}};  // as in the desk fits
  Outcome o;

  // No BC: alpha = 2.4, beta = 2, screened with each screenable alarm family.
  const auto none = desk_replicates(baseline_scenario(2.4, 2.0), m, 606);
  std::map<std::string, std::size_t> baseline_selected;
  const std::vector<std::string> families{"1A", "2A", "3A"};
  for (std::size_t k = 0; k < m; ++k) {
    std::string line = "no BC rep " + std::to_string(k + 1) + ": inclusion";
    for (std::size_t f = 0; f < families.size(); ++f) {
      const auto spec = grid_spec(families[f]);
      cfg.rng_seed = derive_seed(606, 1000 + 8 * k + f);
      const auto r = screen(spec, none[k].population, none[k].history, {}, default_priors(spec), cfg);
      baseline_selected[families[f]] += r.bc_selected ? 0 : 1;
      line += " " + families[f] + "=" + fmt(r.inclusion_probability, 3);
    }
    o.details.push_back(line);
  }

  // Strongest scaled-exponential scenario of the screening study: delta1 = 0.02, delta2 = 0.8.
  auto strong = grid_scenario("3A", Strength::Weak);
  const auto bc = desk_replicates(strong, m, 607);
  std::size_t bc_selected = 0;
  std::string line = "3A (0.02, 0.8) inclusion:";
  for (std::size_t k = 0; k < m; ++k) {
    cfg.rng_seed = derive_seed(607, 1000 + k);
    const auto r = screen(strong.spec, bc[k].population, bc[k].history, {}, default_priors(strong.spec), cfg);
    bc_selected += r.bc_selected ? 1 : 0;
    line += " " + fmt(r.inclusion_probability, 3);
  }
  o.details.push_back(line);
  const double secs = seconds_since(t0);

  bool pass = bc_selected >= 0.95 * m && secs < 3 * 3600;
  std::string sel;
  for (const auto& f : families) {
    pass = pass && baseline_selected[f] >= 0.75 * m;
    sel += (sel.empty() ? "" : ", ") + f + " " + std::to_string(baseline_selected[f]) + "/" + std::to_string(m);
  }
  o.pass = pass;
  o.summary = "no BC -> Baseline selected (" + sel + "); 3A delta1=0.02 -> BC-ILM selected " +
              std::to_string(bc_selected) + "/" + std::to_string(m) + " (" + std::to_string(iters) + " iterations, " +
              fmt(secs, 4) + " s)";
  return o;
}

Outcome criterion7() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<double> s(100000);
  for (double& x : s) x = u(rng);
  const double width = hpdi(s, 0.95).width();

  std::normal_distribution<double> n01(0, 1);
  std::size_t ok = 0;
  std::vector<double> chain(5000);
  for (int trial = 0; trial < 1000; ++trial) {
    for (double& x : chain) x = n01(rng);
    const auto g = geweke_diagnostic(chain);
    ok += (!g.stuck && std::abs(g.z) < 3) ? 1 : 0;
  }

  const auto rep = desk_replicates(baseline_scenario(2.4, 2.0), 1, 707).front();
  PosteriorSample point;
  point.names = {"alpha", "beta"};
  for (int k = 0; k < 200; ++k) point.append({2.4, 2.0}, 0, 0);
  const auto w = waic(grid_spec("Base"), rep.population, rep.history, point);
  const double secs = seconds_since(t0);

  Outcome o;
  o.pass = std::abs(width - 0.95) <= 0.02 && ok >= 990 && w.p_waic == 0.0 && secs < 30;
  o.summary = "HPDI width " + fmt(width, 5) + ", Geweke |z| < 3 in " + std::to_string(ok) +
              "/1000 iid chains, degenerate p_waic = " + fmt(w.p_waic) + " (" + fmt(secs, 3) + " s)";
  return o;
}

// ---------------------------------------------------------------------------

#ifdef BCILM_CLI_PATH
std::map<std::string, std::string> read_tree(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    std::ifstream in(e.path(), std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    files[fs::relative(e.path(), dir).string()] = s.str();
  }
  return files;
}
#endif

Outcome criterion8() {
  Outcome o;
#ifndef BCILM_CLI_PATH
  o.summary = "command-line tool not built";
  return o;
#else
  const auto t0 = Clock::now();
  const fs::path root = fs::temp_directory_path() / "bcilm_acceptance_c8";
  fs::remove_all(root);
  fs::create_directories(root);
  std::ofstream(root / "run.json") << R"({
  "seed": 808,
  "population": {"generate": {"n": 150, "x_range": [0, 40], "y_range": [0, 40]}},
  "model": {"grid": "3A", "strength": "strong", "parameters": {"alpha": {"init": 1}, "beta": {"init": 1}}},
  "simulation": {"t_max": 15, "replicates": 2},
  "mcmc": {"iterations": 3000, "burn_in": 300},
  "screening": {"iterations": 2000, "final_iterations": 2000},
  "analysis": {"n_draws": 50, "t_cut": 6, "horizon": 15},
  "compare": [{"label": "3A", "chain": "fit/chain.csv"}, {"label": "Base", "chain": "fitbase/chain.csv"}],
  "study": {"mode": "waic", "true_models": ["3A", "none"], "fit_models": ["Base", "3A"], "replicates": 2}
})";
  std::ofstream(root / "base.json") << R"({
  "seed": 808,
  "population": {"generate": {"n": 150, "x_range": [0, 40], "y_range": [0, 40]}},
  "model": {"grid": "Base"},
  "mcmc": {"iterations": 3000, "burn_in": 300}
})";
  const std::string data = " --population sim/rep_001/population.csv --events sim/rep_001/events.csv";
  const std::vector<std::pair<std::string, std::string>> steps{
      {"sim", "simulate"},
      {"fit", "fit" + data},
      {"fitbase", "fit" + data},
      {"screen", "screen --then-fit" + data},
      {"ppd", "ppd --chain fit/chain.csv" + data},
      {"forecast", "forecast --chain fit/chain.csv" + data},
      {"compare", "compare" + data},
      {"study", "study"}};

  std::size_t identical = 0, files = 0;
  std::vector<std::string> problems;
  // Two runs with --threads 2 and one with --threads 1; all must agree.
  std::vector<std::map<std::string, std::map<std::string, std::string>>> runs;
  for (const char* threads : {"2", "2", "1"}) {
    const fs::path run_dir = root / (std::string("run") + std::to_string(runs.size()));
    fs::create_directories(run_dir);
    fs::copy_file(root / "run.json", run_dir / "run.json");
    fs::copy_file(root / "base.json", run_dir / "base.json");
    std::map<std::string, std::map<std::string, std::string>> outputs;
    for (const auto& [dir, args] : steps) {
      const std::string config = dir == "fitbase" ? "base.json" : "run.json";
      const std::string cmd = "-c " + (run_dir / config).string() + " --threads " + threads + " -o " +
                              (run_dir / dir).string() + " " + args;
      // Relative data paths resolve against the run directory.
      const std::string full = "sh -c 'cd " + run_dir.string() + " && " + BCILM_CLI_PATH + " " + cmd + "'";
      const int status = std::system((full + " > " + (run_dir / (dir + ".log")).string() + " 2>&1").c_str());
      if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) problems.push_back(dir + " exited with status " + std::to_string(status));
      if (fs::exists(run_dir / dir)) outputs[dir] = read_tree(run_dir / dir);
    }
    runs.push_back(std::move(outputs));
  }
  for (const auto& [dir, tree] : runs[0]) {
    for (const auto& [name, content] : tree) {
      ++files;
      bool same = true;
      for (std::size_t r = 1; r < runs.size(); ++r) {
        const auto d = runs[r].find(dir);
        if (d == runs[r].end() || !d->second.count(name) || d->second.at(name) != content) same = false;
      }
      if (same) ++identical;
      else problems.push_back(dir + "/" + name + " differs between runs");
    }
  }
  const double secs = seconds_since(t0);
  o.pass = problems.empty() && files > 20 && identical == files;
  o.summary = std::to_string(identical) + "/" + std::to_string(files) +
              " output files byte-identical across 2 reruns at --threads 2 and one at --threads 1, 7 commands (" +
              fmt(secs, 3) + " s)";
  o.details = problems;
  return o;
#endif
}

}  // namespace

int main(int argc, char** argv) {
  const std::map<int, std::function<Outcome()>> criteria{{1, criterion1}, {2, criterion2}, {3, criterion3},
                                                          {4, criterion4}, {5, criterion5}, {6, criterion6},
                                                          {7, criterion7}, {8, criterion8}};
  std::vector<int> selected;
  for (int k = 1; k < argc; ++k) selected.push_back(std::atoi(argv[k]));
  if (selected.empty())
    for (const auto& [k, f] : criteria) selected.push_back(k);

  int failures = 0;
  for (int k : selected) {
    const auto it = criteria.find(k);
    if (it == criteria.end()) {
      std::cerr << "unknown criterion " << k << "\n";
      return 2;
    }
    Outcome o;
    try {
      o = it->second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.summary = std::string("error: ") + e.what();
    }
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << k << ": " << o.summary << "\n";
    for (const auto& d : o.details) std::cout << "    " << d << "\n";
    std::cout.flush();
    failures += o.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
