#include <gtest/gtest.h>

#include <cmath>

#include "bcilm/error.hpp"
#include "bcilm/scenarios.hpp"
#include "bcilm/simulate.hpp"

using namespace bcilm;

namespace {

Population small_pop(std::uint64_t seed, std::size_t n = 60) { return generate_population(n, {0, 20}, {0, 20}, seed); }

}  // namespace

TEST(Simulate, WindowAndSeeds) {
  const auto sc = baseline_scenario(2.4, 2.0);
  SimulationConfig cfg;
  cfg.t_max = 12;
  cfg.n_seeds = 3;
  const auto h = simulate_epidemic(sc.spec, small_pop(1), sc.params, cfg);
  EXPECT_EQ(h.t_min(), 1);
  EXPECT_EQ(h.t_max(), 13);
  EXPECT_EQ(h.epidemic_curve().size(), 12u);
  EXPECT_EQ(h.seed_count(), 3u);
  for (std::size_t i = 0; i < h.size(); ++i) {
    const auto ev = h.event_time(i);
    if (!ev) continue;
    if (*ev < h.t_min()) EXPECT_EQ(*ev, h.t_min() - 1);
    EXPECT_EQ(h.transitions(i).removal_time, *h.transitions(i).infection_time + 3);
  }
}

TEST(Simulate, SeededDeterminism) {
  const auto sc = grid_scenario("3A", Strength::Medium);
  SimulationConfig cfg;
  cfg.rng_seed = 42;
  const auto pop = generate_population(80, {0, 30}, {0, 30}, 5);
  EXPECT_EQ(simulate_epidemic(sc.spec, pop, sc.params, cfg), simulate_epidemic(sc.spec, pop, sc.params, cfg));
  cfg.rng_seed = 43;
  const auto other = simulate_epidemic(sc.spec, pop, sc.params, cfg);
  cfg.rng_seed = 42;
  EXPECT_FALSE(other == simulate_epidemic(sc.spec, pop, sc.params, cfg));
}

TEST(Simulate, ExplicitSeedsAndValidation) {
  const auto sc = baseline_scenario(2.4, 2.0);
  SimulationConfig cfg;
  cfg.seeds = {4, 7};
  const auto h = simulate_epidemic(sc.spec, small_pop(2), sc.params, cfg);
  EXPECT_EQ(h.seed_count(), 2u);
  EXPECT_EQ(h.event_time(4), 0);
  cfg.seeds = {600};
  EXPECT_THROW(simulate_epidemic(sc.spec, small_pop(2), sc.params, cfg), ConfigError);
}

TEST(Simulate, FirstStepInfectionFrequencyMatchesProbability) {
  // Two individuals 9 apart, one seed: P(infection at t_min) = 1 - exp(-0.022).
  const Population pop({Individual{0, 0, 0, {}}, Individual{1, 9, 0, {}}});
  const auto sc = baseline_scenario(2.2, 2.0);
  SimulationConfig cfg;
  cfg.t_max = 1;
  cfg.seeds = {1};
  const int trials = 200000;
  int hits = 0;
  for (int k = 0; k < trials; ++k) {
    cfg.rng_seed = static_cast<std::uint64_t>(k) + 1;
    hits += simulate_epidemic(sc.spec, pop, sc.params, cfg).event_time(0).has_value() ? 1 : 0;
  }
  const double p = -std::expm1(-0.022);
  const double se = std::sqrt(p * (1 - p) / trials);
  EXPECT_NEAR(static_cast<double>(hits) / trials, p, 4 * se);
}

TEST(Simulate, BatchIndependentOfThreads) {
  const auto sc = grid_scenario("1A", Strength::Medium);
  SimulationConfig cfg;
  cfg.t_max = 10;
  cfg.rng_seed = 9;
  auto make = [](std::uint64_t s) { return generate_population(50, {0, 25}, {0, 25}, s); };
  const auto a = simulate_batch(sc.spec, make, sc.params, cfg, 5, 1);
  const auto b = simulate_batch(sc.spec, make, sc.params, cfg, 5, 3);
  ASSERT_EQ(a.size(), 5u);
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a[k].population, b[k].population);
    EXPECT_EQ(a[k].history, b[k].history);
  }
  EXPECT_FALSE(a[0].history == a[1].history);
}

TEST(Simulate, ContinueKeepsEarlierEvents) {
  const auto sc = baseline_scenario(2.4, 2.0);
  SimulationConfig cfg;
  cfg.t_max = 15;
  cfg.rng_seed = 3;
  const auto pop = small_pop(3);
  const auto h = simulate_epidemic(sc.spec, pop, sc.params, cfg);
  Rng rng(5);
  const auto cont = continue_epidemic(sc.spec, pop, sc.params, cfg.periods, h, 6, 12, rng);
  EXPECT_EQ(cont.t_max(), 12);
  for (std::size_t i = 0; i < h.size(); ++i) {
    const auto ev = h.event_time(i);
    if (ev && *ev < 6) EXPECT_EQ(cont.event_time(i), ev);
    if (const auto e2 = cont.event_time(i); e2 && (!ev || *ev >= 6)) {
      EXPECT_GE(*e2, 6);
      EXPECT_LT(*e2, 12);
    }
  }
}

TEST(Simulate, SeirSimulation) {
  auto sc = baseline_scenario(2.4, 2.0);
  sc.spec.framework = Framework::SEIR;
  SimulationConfig cfg;
  cfg.periods.exposed_period = 2;
  cfg.t_max = 10;
  const auto h = simulate_epidemic(sc.spec, small_pop(4), sc.params, cfg);
  for (std::size_t i = 0; i < h.size(); ++i)
    if (const auto e = h.transitions(i).exposure_time) EXPECT_EQ(h.transitions(i).infection_time, *e + 2);
  cfg.periods.exposed_period.reset();
  EXPECT_THROW(simulate_epidemic(sc.spec, small_pop(4), sc.params, cfg), ConfigError);
}
