#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "unlearn/data.hpp"
#include "unlearn/fit.hpp"

using namespace unlearn;

TEST(InjectFeature, Construction) {
  const Dataset d(Matrix(3, 1, {5, 6, 7}), Vector{1, -1, 2});
  const Dataset out = inject_feature(d, DeletionRequest({0}, 3));
  ASSERT_EQ(out.cols(), 2u);
  EXPECT_EQ(out.x().col_copy(1), (Vector{1, 0, 0}));
  EXPECT_EQ(out.x().col_copy(0), d.x().col_copy(0));
  EXPECT_EQ(out.y(), d.y());
  EXPECT_EQ(inject_feature(d, DeletionRequest({1, 2}, 3), 3.0).x().col_copy(1), (Vector{0, -3, 6}));
  EXPECT_THROW(inject_feature(d, DeletionRequest({}, 3)), std::invalid_argument);
}

TEST(InjectFeature, KeepsNames) {
  const Dataset d(Matrix(2, 1, {1, 2}), Vector{1, 2}, {"f"});
  EXPECT_EQ(inject_feature(d, DeletionRequest({1}, 2)).feature_names(), (std::vector<std::string>{"f", "injected"}));
}

TEST(InjectFeature, RetrainZeroesInjectedWeight) {
  const Dataset base = gen_synthetic_sparse(200, 20, 0.3, 1);
  const DeletionRequest group({3, 50, 77}, 200);
  const Dataset d = inject_feature(base, group);
  const UnlearnResult r = retrain_exact(d, group, kDefaultLambda);
  EXPECT_EQ(fit_score(r.theta, 20), 0.0);
}

TEST(InjectFeature, FullModelLearnsStrongSignal) {
  // Labels carry no signal from the base features, so their weights form a
  // null distribution; the injected column explains its group exactly.
  std::mt19937_64 rng(2);
  std::normal_distribution<double> normal(0.0, 1.0);
  Dataset base = gen_synthetic_sparse(500, 30, 0.5, 3);
  Vector y(500);
  for (double& v : y) v = normal(rng);
  base = Dataset(base.x(), y);
  const Dataset d = inject_feature(base, DeletionRequest(sample_indices(500, 5, 4), 500));
  const RidgeModel m = train_full(d, kDefaultLambda);
  std::vector<double> null_weights;
  for (std::size_t j = 0; j < 30; ++j) null_weights.push_back(std::abs(m.theta[j]));
  EXPECT_GT(fit_score(m.theta, 30), 10.0 * median(null_weights));
}

TEST(FitScore, AbsoluteValue) {
  EXPECT_EQ(fit_score(Vector{1, 0}, 1), 0.0);
  EXPECT_EQ(fit_score(Vector{1, -0.0081}, 1), 0.0081);
  EXPECT_THROW(fit_score(Vector{1}, 1), std::out_of_range);
}

TEST(FitSuite, RetrainRowIsZeroAndDeterministic) {
  FitTrialConfig cfg;
  cfg.n = 300;
  cfg.d = 40;
  cfg.k = 4;
  cfg.seed = 17;
  const FitReport a = run_fit_suite(cfg, 8);
  EXPECT_EQ(a.trials, 8u);
  ASSERT_EQ(a.summaries.size(), 3u);
  const MethodSummary& rt = a.summary(Method::retrain);
  EXPECT_EQ(rt.mean_fit, 0.0);
  EXPECT_EQ(rt.median_fit, 0.0);
  EXPECT_EQ(rt.completed, 8u);
  for (const auto& t : a.trial_records) {
    EXPECT_GT(t.baseline, 0.0);
    for (const auto& m : t.methods) {
      ASSERT_TRUE(m.score.has_value());
      EXPECT_GE(*m.score, 0.0);
      if (m.method == Method::retrain) {
        EXPECT_LE(*m.score, 1e-12);
      }
    }
  }

  const FitReport b = run_fit_suite(cfg, 8, /*parallel_trials=*/true);
  for (std::size_t i = 0; i < a.summaries.size(); ++i) {
    EXPECT_EQ(a.summaries[i].mean_fit, b.summaries[i].mean_fit);
    EXPECT_EQ(a.summaries[i].median_fit, b.summaries[i].median_fit);
    EXPECT_EQ(a.summaries[i].mean_ratio, b.summaries[i].mean_ratio);
  }
  EXPECT_EQ(a.baseline_mean, b.baseline_mean);
  for (std::size_t t = 0; t < 8; ++t) {
    EXPECT_EQ(a.trial_records[t].seed, b.trial_records[t].seed);
    for (std::size_t m = 0; m < 3; ++m) EXPECT_EQ(a.trial_records[t].methods[m].score, b.trial_records[t].methods[m].score);
  }
  EXPECT_THROW(a.summary(Method::newton), std::out_of_range);
}

TEST(FitSuite, ResidualBeatsInfluenceInSparseRegime) {
  FitTrialConfig cfg;
  cfg.n = 600;
  cfg.d = 150;
  cfg.k = 30;
  cfg.p = 0.1;
  cfg.seed = 5;
  cfg.methods = {Method::influence, Method::residual};
  const FitReport r = run_fit_suite(cfg, 10);
  EXPECT_LT(r.summary(Method::residual).mean_fit, r.summary(Method::influence).mean_fit);
}

TEST(FitSuite, DegenerateTrialsAreRecorded) {
  // Without ridge, deleting the group leaves the injected column all zero:
  // retraining is singular and the deleted block has leverage one.
  FitTrialConfig cfg;
  cfg.n = 100;
  cfg.d = 8;
  cfg.k = 3;
  cfg.p = 1.0;
  cfg.lambda = 0.0;
  cfg.seed = 1;
  cfg.methods = {Method::retrain, Method::influence, Method::residual};
  const FitReport r = run_fit_suite(cfg, 4);
  EXPECT_EQ(r.summary(Method::retrain).failures, 4u);
  EXPECT_EQ(r.summary(Method::residual).failures, 4u);
  EXPECT_EQ(r.summary(Method::influence).completed, 4u);
  EXPECT_TRUE(std::isnan(r.summary(Method::residual).mean_fit));
  for (const auto& t : r.trial_records) EXPECT_FALSE(t.methods[2].error.empty());
}

TEST(FitSuite, Validation) {
  FitTrialConfig cfg;
  cfg.n = 10;
  cfg.k = 10;
  EXPECT_THROW(run_fit_suite(cfg, 1), std::invalid_argument);
  cfg.k = 2;
  EXPECT_THROW(run_fit_suite(cfg, 0), std::invalid_argument);
  cfg.p = 0.0;
  EXPECT_THROW(run_fit_suite(cfg, 1), std::invalid_argument);
}
