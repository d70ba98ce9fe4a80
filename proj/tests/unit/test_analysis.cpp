#include <gtest/gtest.h>

#include <cmath>

#include "bcilm/analysis.hpp"
#include "bcilm/error.hpp"
#include "bcilm/inference.hpp"
#include "bcilm/scenarios.hpp"
#include "bcilm/simulate.hpp"

using namespace bcilm;

namespace {

struct Fitted {
  Population pop = generate_population(60, {0, 20}, {0, 20}, 41);
  EpidemicHistory history;
  ModelSpec spec = grid_spec("Base");
  PosteriorSample posterior;
  Fitted() {
    const auto sc = baseline_scenario(2.4, 2.0);
    SimulationConfig cfg;
    cfg.t_max = 12;
    cfg.rng_seed = 6;
    history = simulate_epidemic(sc.spec, pop, sc.params, cfg);
    MCMCConfig m;
    m.iterations = 3000;
    m.burn_in = 500;
    posterior = fit(spec, pop, history, {}, default_priors(spec), m);
  }
};

}  // namespace

TEST(Band, OrderStatistics) {
  std::vector<std::vector<int>> curves;
  for (int k = 0; k < 100; ++k) curves.push_back({k, 7});
  const auto band = curve_band(curves, 3);
  EXPECT_EQ(band.t, (std::vector<int>{3, 4}));
  EXPECT_EQ(band.median[0], 49.0);
  EXPECT_EQ(band.upper[0] - band.lower[0], 94.0);
  EXPECT_EQ(band.lower[1], 7.0);
  EXPECT_EQ(band.upper[1], 7.0);
  EXPECT_EQ(band.coverage({50, 7}), 1.0);
  EXPECT_EQ(band.coverage({99, 8}), 0.0);
  EXPECT_THROW(band.coverage({1}), ValidationError);
  EXPECT_THROW(curve_band({}, 1), DomainError);
}

TEST(Waic, MatchesHandComputation) {
  const std::vector<std::vector<double>> terms{{-1.0, -0.5}, {-2.0, -0.5}, {-0.5, -0.7}};
  const auto e = waic_from_terms(terms, "m");
  double lppd = 0, pw = 0;
  for (std::size_t p = 0; p < 2; ++p) {
    double s = 0, m = 0;
    for (const auto& d : terms) {
      s += std::exp(d[p]);
      m += d[p] / 3;
    }
    double v = 0;
    for (const auto& d : terms) v += (d[p] - m) * (d[p] - m) / 2;
    lppd += std::log(s / 3);
    pw += v;
  }
  EXPECT_NEAR(e.lppd, lppd, 1e-14);
  EXPECT_NEAR(e.p_waic, pw, 1e-14);
  EXPECT_NEAR(e.waic, -2 * (lppd - pw), 1e-13);
  EXPECT_EQ(e.n_points, 2u);
  EXPECT_THROW(waic_from_terms({{1.0}}), DomainError);
}

TEST(Waic, DegeneratePosteriorHasZeroPenalty) {
  Fitted f;
  PosteriorSample point;
  point.names = {"alpha", "beta"};
  point.fixed = ModelParams{};
  for (int k = 0; k < 50; ++k) point.append({2.4, 2.0}, 0, 0);
  const auto e = waic(f.spec, f.pop, f.history, point);
  EXPECT_EQ(e.p_waic, 0.0);
  ModelParams p;
  p.alpha = 2.4;
  p.beta = 2.0;
  EXPECT_NEAR(e.lppd, log_likelihood(f.spec, f.pop, f.history, p), 1e-9);
}

TEST(Waic, IndependentOfThreadsAndThinned) {
  Fitted f;
  const auto a = waic(f.spec, f.pop, f.history, f.posterior, "Base", 1000, 1);
  const auto b = waic(f.spec, f.pop, f.history, f.posterior, "Base", 1000, 3);
  EXPECT_EQ(a.waic, b.waic);
  EXPECT_EQ(a.p_waic, b.p_waic);
  EXPECT_LE(a.n_draws, 1000u);
  EXPECT_GT(a.p_waic, 0.0);
  EXPECT_EQ(a.n_points, pointwise_log_terms(f.spec, f.pop, f.history, f.posterior.params_at(0)).size());
}

TEST(Waic, CompareFlagsMinimum) {
  std::vector<WaicEntry> e(3);
  e[0].model = "Base";
  e[0].waic = 10;
  e[1].model = "1A";
  e[1].waic = 4;
  e[2].model = "2A";
  e[2].waic = 7;
  const auto r = compare_models(e);
  EXPECT_EQ(r.best, 1u);
  EXPECT_EQ(r.delta(0, 1), 6.0);
  EXPECT_EQ(r.to_csv().substr(0, r.to_csv().find('\n')), "model,lppd,p_waic,waic,delta_vs_best,best,n_draws,n_points");
  EXPECT_EQ(model_grid_labels().size(), 9u);
}

TEST(Predictive, PpdAndForecastBands) {
  Fitted f;
  PeriodSpec periods;
  const auto ppd = ppd_curve(f.spec, f.pop, periods, f.history, f.posterior, 40, 3, 2);
  EXPECT_EQ(ppd.size(), f.history.epidemic_curve().size());
  EXPECT_EQ(ppd.n_draws, 40u);
  EXPECT_EQ(ppd.t.front(), f.history.t_min());
  for (std::size_t k = 0; k < ppd.size(); ++k) {
    EXPECT_LE(ppd.lower[k], ppd.median[k]);
    EXPECT_LE(ppd.median[k], ppd.upper[k]);
  }
  const auto again = ppd_curve(f.spec, f.pop, periods, f.history, f.posterior, 40, 3, 1);
  EXPECT_EQ(ppd.upper, again.upper);
  EXPECT_EQ(ppd.median, again.median);

  const auto fc = forecast_curve(f.spec, f.pop, periods, f.history, f.posterior, 5, 20, 30, 4);
  EXPECT_EQ(fc.t.front(), 6);
  EXPECT_EQ(fc.t.back(), 20);
  EXPECT_THROW(forecast_curve(f.spec, f.pop, periods, f.history, f.posterior, 8, 8, 30, 4), RangeError);
}
