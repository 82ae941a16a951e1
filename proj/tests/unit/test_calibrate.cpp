#include <gtest/gtest.h>

#include <cmath>

#include "herdbook/calibrate/calibrate.hpp"
#include "herdbook/core/error.hpp"
#include "herdbook/model/simulation.hpp"

using namespace herdbook;
using namespace herdbook::calibrate;

namespace {

ObjectiveConfig short_config(double horizon) {
  ObjectiveConfig c;
  c.run.horizon_s = horizon;
  c.curves.psd_segment_length = 4096;
  return c;
}

CalibrationTarget make_target(const model::ModelParams& p, const ObjectiveConfig& c, std::uint64_t seed) {
  model::RunConfig run = c.run;
  run.seed = seed;
  const auto out = model::run_simulation(p, run);
  auto t = target_from_curves(stats::compute_curve_set(out.price, out.trades, c.curves));
  t.curves[0].interval = {0.1, 10.0};
  t.curves[1].interval = {1e-6, 1e-3};
  t.curves[2].interval = {0.1, 10.0};
  t.curves[3].interval = {1e-6, 1e-3};
  return t;
}

stats::StatCurve line(double scale) {
  stats::StatCurve c;
  for (int i = 1; i <= 10; ++i) {
    c.grid.push_back(i);
    c.values.push_back(scale / i);
  }
  return c;
}

}  // namespace

TEST(Objective, FactorTenGivesUnitRmse) {
  stats::CurveSet model{line(1), line(1), line(1), line(1)};
  stats::CurveSet target_set{line(10), line(1), line(1), line(1)};
  const auto v = score_curves(model, target_from_curves(target_set));
  EXPECT_NEAR(v.rmse[0], 1.0, 1e-12);
  EXPECT_NEAR(v.rmse[1], 0.0, 1e-12);
  EXPECT_NEAR(v.value, 1.0, 1e-12);
  EXPECT_NEAR(score_curves(model, target_from_curves(target_set), Aggregation::Mean).value, 0.25, 1e-12);
}

TEST(Objective, NoSupportIsPenalized) {
  stats::CurveSet model{line(1), line(1), line(1), line(1)};
  auto target = target_from_curves(model);
  target.curves[2].interval = {50.0, 60.0};
  const auto v = score_curves(model, target, Aggregation::Max, 123.0);
  EXPECT_TRUE(v.penalized);
  EXPECT_EQ(v.value, 123.0);
}

TEST(Objective, SameSeedIsExact) {
  const auto p = model::fig3_params();
  const auto c = short_config(5e6);
  const auto target = make_target(p, c, 17);
  EXPECT_LT(objective(p, target, c, 17), 0.05);
  EXPECT_EQ(objective(p, target, c, 17), 0.0);
}

TEST(Objective, OtherSeedIsClose) {
  const auto p = model::btc_fit_params();
  const auto c = short_config(3e8);
  const auto target = make_target(p, c, 17);
  const double v = objective(p, target, c, 18);
  EXPECT_GT(v, 0.0);
  EXPECT_LT(v, 0.15);
}

TEST(Objective, DegenerateModelIsPenalty) {
  auto p = model::fig3_params();
  const auto c = short_config(5e6);
  const auto target = make_target(p, c, 1);
  p.lambda_tc = 0;
  p.lambda_tf = 0;
  const auto v = evaluate_objective(p, target, c, 1);
  EXPECT_TRUE(v.penalized);
  EXPECT_EQ(v.value, c.penalty);
}

TEST(Objective, ReplicasAverage) {
  const auto p = model::fig3_params();
  auto c = short_config(5e6);
  const auto target = make_target(p, c, 3);
  c.replicas = 3;
  c.threads = 2;
  const auto a = objective(p, target, c, 3);
  EXPECT_GT(a, 0.0);
  EXPECT_EQ(a, objective(p, target, c, 3));
}

namespace {

AnnealingConfig small_anneal(int iterations) {
  AnnealingConfig a;
  a.initial = model::fig3_params();
  a.objective = short_config(2e6);
  a.iterations = iterations;
  a.seed = 5;
  a.bounds = default_bounds(a.initial);
  for (auto& [name, b] : a.bounds) b.frozen = true;
  a.bounds["eps_cf"].frozen = false;
  a.bounds["alpha"].frozen = false;
  a.bounds["lambda_tc"].frozen = false;
  return a;
}

}  // namespace

TEST(Anneal, ZeroIterationsReturnsInitial) {
  auto a = small_anneal(0);
  const auto target = make_target(a.initial, a.objective, 5);
  const auto r = anneal(a, target);
  EXPECT_EQ(r.best, a.initial);
  EXPECT_EQ(r.trace.size(), 1u);
  EXPECT_EQ(r.best_objective, 0.0);
}

TEST(Anneal, BestNeverIncreasesAndBoundsHold) {
  auto a = small_anneal(15);
  auto shifted = a.initial;
  shifted.eps_cf = 2.0;
  const auto target = make_target(shifted, a.objective, 99);
  const auto r = anneal(a, target);
  ASSERT_EQ(r.trace.size(), 16u);
  for (std::size_t i = 1; i < r.trace.size(); ++i) {
    const auto& e = r.trace[i];
    EXPECT_LE(e.best_objective, r.trace[i - 1].best_objective);
    const auto& b = a.bounds.at(e.parameter);
    EXPECT_GE(e.proposed_value, b.lo);
    EXPECT_LE(e.proposed_value, b.hi);
  }
  EXPECT_EQ(r.best_objective, r.trace.back().best_objective);
  EXPECT_EQ(r.best.gamma_k, a.initial.gamma_k);
}

TEST(Anneal, ColdLimitOnlyMovesDownhill) {
  auto a = small_anneal(10);
  a.initial_temperature = 1e-300;
  auto shifted = a.initial;
  shifted.alpha = 2.0;
  const auto target = make_target(shifted, a.objective, 7);
  const auto r = anneal(a, target);
  for (std::size_t i = 1; i < r.trace.size(); ++i)
    EXPECT_LE(r.trace[i].current_objective, r.trace[i - 1].current_objective);
}

TEST(Anneal, Reproducible) {
  auto a = small_anneal(6);
  const auto target = make_target(model::btc_fit_params(), a.objective, 3);
  const auto r1 = anneal(a, target);
  const auto r2 = anneal(a, target);
  ASSERT_EQ(r1.trace.size(), r2.trace.size());
  for (std::size_t i = 0; i < r1.trace.size(); ++i) {
    EXPECT_EQ(r1.trace[i].parameter, r2.trace[i].parameter);
    EXPECT_EQ(r1.trace[i].proposed_value, r2.trace[i].proposed_value);
    EXPECT_EQ(r1.trace[i].objective, r2.trace[i].objective);
  }
  EXPECT_EQ(r1.best, r2.best);
}

TEST(Anneal, RejectsBadConfig) {
  auto a = small_anneal(5);
  const auto target = make_target(a.initial, a.objective, 1);
  a.cooling = 1.5;
  EXPECT_THROW(anneal(a, target), ConfigError);
  a = small_anneal(5);
  for (auto& [name, b] : a.bounds) b.frozen = true;
  EXPECT_THROW(anneal(a, target), ConfigError);
  a = small_anneal(5);
  a.bounds["eps_cf"] = {5.0, 6.0, false};
  EXPECT_THROW(anneal(a, target), ConfigError);
}

TEST(DefaultBounds, Shape) {
  const auto p = model::fig3_params();
  const auto b = default_bounds(p);
  EXPECT_TRUE(b.at("n_agents").frozen);
  EXPECT_FALSE(b.at("eps_cf").frozen);
  EXPECT_DOUBLE_EQ(b.at("lambda_tc").lo, p.lambda_tc / 10);
  EXPECT_DOUBLE_EQ(b.at("lambda_tc").hi, p.lambda_tc * 10);
  EXPECT_DOUBLE_EQ(b.at("alpha").lo, 0.0);
  EXPECT_DOUBLE_EQ(b.at("xi0").hi, 1.0);
}
