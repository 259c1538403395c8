#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "mbgdt/bench.hpp"
#include "mbgdt/error.hpp"

namespace mbgdt {
namespace {

Scenario quick(ContaminationFamily family, double eps) {
  Scenario s;
  s.contamination.family = family;
  s.contamination.epsilon = eps;
  s.contamination.offset_y_ratio = default_offset_y_ratio(family);
  s.model.max_iter = 3000;
  return s;
}

TEST(Mse, Examples) {
  const TrueCurve c;
  Dataset test;
  for (int i = 0; i < 50; ++i) {
    const double x = -1.0 + 0.04 * i;
    test.add({x, c.eval(x)});
  }
  EXPECT_NEAR(mse(WeightVector(c.coeffs), ScaleParams::identity(), test), 0.0, 1e-28);

  const Dataset ones({{0.3, 1.0}, {-2.0, 1.0}, {7.0, 1.0}});
  EXPECT_EQ(mse(WeightVector({0, 0}), ScaleParams::identity(), ones), 1.0);
  EXPECT_EQ(mse(WeightVector({4}), ScaleParams::identity(), Dataset({{0, 1}})), 9.0);
}

TEST(Mse, UsesScaleMapAndPlainSquare) {
  // Model y = x' on scaled x' = (x - 2) / 2; at x = 4, x' = 1, residual 1 - 3 = -2.
  EXPECT_EQ(mse(WeightVector({0, 1}), ScaleParams{2.0, 2.0}, Dataset({{4.0, 3.0}})), 4.0);
}

TEST(Mse, EmptyThrows) {
  EXPECT_THROW(mse(WeightVector({0}), ScaleParams::identity(), Dataset()), InvalidInput);
}

TEST(Scenario, TrimDefaultsToEpsilon) {
  EXPECT_EQ(quick(ContaminationFamily::Random, 0.3).trimmed_config().trim_fraction, 0.3);
  EXPECT_EQ(quick(ContaminationFamily::None, 0.0).trimmed_config().trim_fraction, 0.0);
  Scenario s = quick(ContaminationFamily::Random, 0.3);
  s.trim_fraction = 0.1;
  EXPECT_EQ(s.trimmed_config().trim_fraction, 0.1);
}

TEST(MakeTrialData, ShapesAndDeterminism) {
  const Scenario s = quick(ContaminationFamily::EdgeCorner, 0.49);
  const TrialData a = make_trial_data(s, 4);
  EXPECT_EQ(a.train.size(), 200u);
  EXPECT_EQ(a.test.size(), 500u);
  EXPECT_EQ(a.train.contaminated_count(), 98u);
  EXPECT_EQ(a.test.contaminated_count(), 0u);
  const TrialData b = make_trial_data(s, 4);
  EXPECT_EQ(a.train, b.train);
  EXPECT_EQ(a.test, b.test);
  EXPECT_NE(make_trial_data(s, 5).train, a.train);
}

TEST(RunTrial, NoContaminationArmsAgree) {
  const TrialResult r = run_trial(quick(ContaminationFamily::None, 0.0), 1);
  ASSERT_TRUE(r.naive.ok());
  ASSERT_TRUE(r.trimmed.ok());
  EXPECT_LT(std::fabs(r.mse_naive() - r.mse_trimmed()) / r.mse_naive(), 0.2);
}

TEST(RunTrial, RandomContaminationFavorsTrimming) {
  const TrialResult r = run_trial(quick(ContaminationFamily::Random, 0.49), 2);
  EXPECT_LT(r.mse_trimmed(), r.mse_naive());
}

TEST(RunTrial, ParallelLineFavorsTrimming) {
  const TrialResult r = run_trial(quick(ContaminationFamily::ParallelLine, 0.49), 3);
  EXPECT_LT(r.mse_trimmed(), r.mse_naive());
}

TEST(RunTrial, DeterministicAndSeeded) {
  Scenario s = quick(ContaminationFamily::EdgeCorner, 0.4);
  s.kernel = KernelSettings{};
  s.dbscan = DbscanConfig{};
  const TrialResult a = run_trial(s, 11);
  EXPECT_EQ(a, run_trial(s, 11));
  EXPECT_EQ(a.seed, 11u);
  ASSERT_TRUE(a.trimmed_kernel.has_value());
  ASSERT_TRUE(a.trimmed_dbscan.has_value());
  EXPECT_TRUE(a.trimmed_kernel->ok());
  EXPECT_TRUE(a.trimmed_dbscan->ok());
  EXPECT_GE(a.trimmed_dbscan->mse, 0.0);
}

TEST(RunTrial, DivergenceIsRecordedPerArm) {
  Scenario s = quick(ContaminationFamily::Random, 0.2);
  s.model.learning_rate = 1e6;
  s.model.loss_kind = LossKind::Huber;
  const TrialResult r = run_trial(s, 1);
  // The squared-loss naive arm blows up; the bounded Huber gradient does not.
  EXPECT_FALSE(r.naive.ok());
  EXPECT_NE(r.naive.error.find("diverged"), std::string::npos);
}

TEST(Summarize, MeanAndSampleStd) {
  const std::vector<double> v{1, 2, 3, 4};
  const ColumnStats s = summarize(v);
  EXPECT_EQ(s.mean, 2.5);
  EXPECT_NEAR(s.std, std::sqrt(5.0 / 3.0), 1e-15);
  EXPECT_EQ(s.min, 1.0);
  EXPECT_EQ(s.max, 4.0);
  EXPECT_EQ(s.count, 4u);
  EXPECT_EQ(summarize(std::vector<double>{7}).std, 0.0);
}

TEST(Summarize, OrderIndependentToTheBit) {
  std::mt19937_64 rng(3);
  std::vector<double> v(50);
  std::lognormal_distribution<double> d(0.0, 3.0);
  for (double& x : v) x = d(rng);
  const ColumnStats a = summarize(v);
  std::shuffle(v.begin(), v.end(), rng);
  EXPECT_EQ(a, summarize(v));
}

TEST(RunRepeated, SingleTrialEqualsRunTrial) {
  const Scenario s = quick(ContaminationFamily::Random, 0.3);
  const RepeatedRun r = run_repeated(s, 1, 42);
  const TrialResult t = run_trial(s, 42);
  EXPECT_EQ(r.trials.at(0), t);
  EXPECT_EQ(r.summary.naive.mean, t.mse_naive());
  EXPECT_EQ(r.summary.trimmed.mean, t.mse_trimmed());
  EXPECT_EQ(r.summary.trimmed.std, 0.0);
}

TEST(RunRepeated, SeedsAreMasterPlusIndex) {
  const RepeatedRun r = run_repeated(quick(ContaminationFamily::None, 0.0), 3, 100);
  ASSERT_EQ(r.trials.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(r.trials[i].seed, 100 + i);
}

TEST(RunRepeated, ThreadCountDoesNotChangeResults) {
  const Scenario s = quick(ContaminationFamily::EdgeCorner, 0.3);
  const RepeatedRun a = run_repeated(s, 6, 7, 0);
  const RepeatedRun b = run_repeated(s, 6, 7, 4);
  EXPECT_EQ(a.trials, b.trials);
  EXPECT_EQ(a.summary, b.summary);
}

TEST(RunRepeated, DegenerateScenarioIsFinite) {
  Scenario s = quick(ContaminationFamily::None, 0.0);
  s.curve.noise_sigma = 0.0;
  const RepeatedRun r = run_repeated(s, 4, 0);
  EXPECT_GE(r.summary.naive.std, 0.0);
  EXPECT_TRUE(std::isfinite(r.summary.naive.std));
  EXPECT_EQ(r.summary.errors, 0u);
}

TEST(RunRepeated, AllTrialsFailingThrows) {
  Scenario s = quick(ContaminationFamily::None, 0.0);
  s.model.loss_kind = LossKind::Squared;
  s.model.learning_rate = 1e6;
  EXPECT_THROW(run_repeated(s, 2, 0), ExperimentFailed);
}

TEST(Aggregate, CountsErrorsAndExcludesThem) {
  std::vector<TrialResult> t(3);
  t[0].naive.mse = 1.0;
  t[0].trimmed.mse = 0.5;
  t[1].naive.error = "boom";
  t[2].naive.mse = 3.0;
  t[2].trimmed.mse = 1.5;
  const Aggregate a = aggregate(t);
  EXPECT_EQ(a.trials, 3u);
  EXPECT_EQ(a.errors, 1u);
  EXPECT_EQ(a.naive.count, 2u);
  EXPECT_EQ(a.naive.mean, 2.0);
  EXPECT_EQ(a.trimmed.mean, 1.0);
  EXPECT_FALSE(a.trimmed_kernel.has_value());
}

TEST(Sweep, RowsFollowGrid) {
  Scenario s = quick(ContaminationFamily::EdgeCorner, 0.3);
  s.model.max_iter = 1000;
  const std::vector<double> grid{0.1, 0.2, 0.3};
  const SweepTable t = sweep(s, SweepParam::Epsilon, grid, 2, 0);
  ASSERT_EQ(t.rows.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(t.rows[i].value, grid[i]);
    EXPECT_EQ(t.rows[i].summary.trials, 2u);
    EXPECT_EQ(t.rows[i].summary.naive.count + t.rows[i].summary.errors, 2u);
  }
}

TEST(Sweep, AppliesParameter) {
  const Scenario s = quick(ContaminationFamily::EdgeCorner, 0.3);
  EXPECT_EQ(apply_sweep_value(s, SweepParam::Epsilon, 0.2).contamination.epsilon, 0.2);
  EXPECT_EQ(apply_sweep_value(s, SweepParam::Epsilon, 0.2).trimmed_config().trim_fraction, 0.2);
  EXPECT_EQ(apply_sweep_value(s, SweepParam::DistanceX, 0.7).contamination.offset_x_ratio, 0.7);
  EXPECT_EQ(apply_sweep_value(s, SweepParam::DistanceY, 0.4).contamination.offset_y_ratio, 0.4);
}

TEST(Sweep, RejectsBadGrids) {
  const Scenario s = quick(ContaminationFamily::EdgeCorner, 0.3);
  EXPECT_THROW(sweep(s, SweepParam::Epsilon, {}, 1, 0), InvalidInput);
  const std::vector<double> desc{0.3, 0.1};
  EXPECT_THROW(sweep(s, SweepParam::Epsilon, desc, 1, 0), InvalidInput);
}

TEST(SweepParamNames, RoundTrip) {
  for (auto p : {SweepParam::Epsilon, SweepParam::DistanceX, SweepParam::DistanceY}) {
    EXPECT_EQ(parse_sweep_param(to_string(p)), p);
  }
  EXPECT_FALSE(parse_sweep_param("distance-z"));
}

}  // namespace
}  // namespace mbgdt
