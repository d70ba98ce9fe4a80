#include <gtest/gtest.h>

#include <cmath>

#include "../instances.hpp"
#include "../oracle.hpp"
#include "bcilm/error.hpp"
#include "bcilm/model.hpp"

using namespace bcilm;

namespace {

// Infinite terms (an infection with zero pressure and no epsilon) must agree
// exactly; finite ones to 1e-9.
::testing::AssertionResult close(double got, double want) {
  if (got == want || std::abs(got - want) <= 1e-9) return ::testing::AssertionSuccess();
  return ::testing::AssertionFailure() << got << " vs " << want;
}

// Susceptible 0 at distance 9 from infectious 1.
struct PairFixture {
  Population pop{{Individual{0, 0, 0, {}}, Individual{1, 9, 0, {}}}};
  EpidemicHistory history;
  PairFixture() {
    TransitionTimes tr;
    tr.infection_time = 0;
    tr.removal_time = 5;
    history = EpidemicHistory(Framework::SIR, {TransitionTimes{}, tr}, 1, 3);
  }
};

}  // namespace

TEST(Model, BaselineProbabilityExample) {
  PairFixture f;
  ModelSpec spec;
  ModelParams p;
  p.alpha = 2.2;
  p.beta = 2.0;
  const double prob = infection_probability(spec, f.pop, f.history, p, 0, 1);
  EXPECT_NEAR(prob, 0.02175976494878995, 1e-15);
  EXPECT_NEAR(prob, 1 - std::exp(-0.022), 1e-15);
  EXPECT_THROW(infection_probability(spec, f.pop, f.history, p, 1, 1), ValidationError);
}

TEST(Model, TypeAHalvesPressure) {
  PairFixture f;
  ModelSpec spec;
  spec.form = ModelForm::TypeA;
  spec.alarm = AlarmSpec{AlarmFamily::Threshold, {}};
  ModelParams p;
  p.alpha = 2.2;
  p.beta = 2.0;
  p.delta1 = 0.5;
  p.delta2 = 0.5;  // one infectious > 0.5, so a_t = 0.5
  EXPECT_NEAR(infection_probability(spec, f.pop, f.history, p, 0, 1), 0.010939721224631271, 1e-15);
}

TEST(Model, TypeBInflatesExponent) {
  PairFixture f;
  ModelSpec spec;
  spec.form = ModelForm::TypeB;
  spec.alarm = AlarmSpec{AlarmFamily::Threshold, {}};
  ModelParams p;
  p.alpha = 2.2;
  p.beta = 2.0;
  p.delta1 = 0.5;
  p.delta2 = 0.5;
  // (9 + 1)^(-2 / 0.5) = 1e-4
  EXPECT_NEAR(infection_probability(spec, f.pop, f.history, p, 0, 1), -std::expm1(-2.2e-4), 1e-16);
}

TEST(Model, LogInfectionStable) {
  EXPECT_NEAR(log_infection(1e-300), std::log(1e-300), 1e-9);
  EXPECT_NEAR(log_infection(2.0), std::log(1 - std::exp(-2.0)), 1e-15);
  EXPECT_EQ(log_infection(0.0), -INFINITY);
}

TEST(Model, MatchesBruteForceOracle) {
  Rng rng(11);
  int finite = 0;
  for (int k = 0; k < 260; ++k) {
    const auto in = instances::make(99, k);
    LikelihoodEngine engine(in.spec, in.pop, in.history);
    // Several parameter sets per engine exercise the pressure cache.
    ModelParams p = instances::params(in, rng);
    for (int rep = 0; rep < 4; ++rep) {
      if (rep == 2) p.beta = instances::params(in, rng).beta;
      if (rep == 3) p = instances::params(in, rng);
      if (rep == 1) p.delta1 = instances::params(in, rng).delta1;
      const auto expect = oracle::terms(in.spec, in.pop, in.history, p);
      std::vector<double> got;
      engine.pointwise(p, got);
      ASSERT_EQ(got.size(), expect.size()) << in.label;
      double sum = 0;
      for (std::size_t q = 0; q < got.size(); ++q) {
        EXPECT_TRUE(close(got[q], expect[q])) << in.label << " term " << q;
        sum += expect[q];
      }
      EXPECT_TRUE(close(engine.log_likelihood(p), sum)) << in.label;
      finite += std::isfinite(sum) ? 1 : 0;
    }
  }
  EXPECT_GT(finite, 600);
}

TEST(Model, PointwiseSumsToLikelihood) {
  Rng rng(3);
  for (int k = 0; k < 50; ++k) {
    const auto in = instances::make(5, k);
    const auto p = instances::params(in, rng);
    const auto terms = pointwise_log_terms(in.spec, in.pop, in.history, p);
    double sum = 0;
    for (double v : terms) sum += v;
    EXPECT_TRUE(close(sum, log_likelihood(in.spec, in.pop, in.history, p)));
  }
}

TEST(Model, ZeroDelta1ReducesToBaselineBitwise) {
  Rng rng(17);
  int checked = 0;
  for (int k = 0; k < 130; ++k) {
    auto in = instances::make(123, k);
    if (!in.spec.alarm || in.spec.alarm->family == AlarmFamily::Hill) continue;
    auto p = instances::params(in, rng);
    p.delta1 = 0.0;
    ModelSpec base = in.spec;
    base.form = ModelForm::Baseline;
    base.alarm.reset();
    EXPECT_EQ(log_likelihood(in.spec, in.pop, in.history, p), log_likelihood(base, in.pop, in.history, p))
        << in.label;
    ++checked;
  }
  EXPECT_GT(checked, 50);
}

TEST(Model, AlarmValuesFollowSpec) {
  const auto in = instances::make(1, 3);
  Rng rng(1);
  const auto p = instances::params(in, rng);
  LikelihoodEngine engine(in.spec, in.pop, in.history);
  EXPECT_EQ(engine.alarm_values(p), alarm_series(*in.spec.alarm, p.delta1, p.delta2, in.history));
}

TEST(Model, SpecValidation) {
  ModelSpec spec;
  spec.alarm = AlarmSpec{};
  EXPECT_THROW(spec.validate(), ConfigError);
  spec.form = ModelForm::TypeA;
  spec.alarm->family = AlarmFamily::Hill;
  spec.alarm->signal.kind = SignalKind::InternalCount;
  EXPECT_THROW(spec.validate(), ConfigError);
  spec.alarm->signal.kind = SignalKind::InternalProportion;
  EXPECT_NO_THROW(spec.validate());
  EXPECT_EQ(spec.parameter_names(), (std::vector<std::string>{"alpha", "beta", "delta1", "delta2"}));
  spec.alarm->family = AlarmFamily::Exponential;
  spec.susceptibility = SusceptibilityKind::BinaryCovariate;
  EXPECT_EQ(spec.parameter_names(), (std::vector<std::string>{"alpha0", "alpha1", "beta", "delta1"}));
}

TEST(Model, ParamsByName) {
  ModelParams p;
  p.set("delta2", 3.5);
  EXPECT_EQ(p.get("delta2"), 3.5);
  EXPECT_THROW(p.set("gamma", 1), ConfigError);
}
