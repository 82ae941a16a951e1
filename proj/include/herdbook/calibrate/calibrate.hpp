#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "herdbook/model/params.hpp"
#include "herdbook/model/simulation.hpp"
#include "herdbook/stats/curve.hpp"
#include "herdbook/stats/pipeline.hpp"

namespace herdbook::calibrate {

inline constexpr std::size_t kCurveCount = 4;
inline constexpr std::array<const char*, kCurveCount> kCurveNames = {"return_pdf", "return_psd", "activity_pdf",
                                                                     "activity_psd"};

/// A target curve and the grid interval used for comparison (whole curve when
/// absent).
struct TargetCurve {
  stats::StatCurve curve;
  std::optional<std::pair<double, double>> interval;
};

/// Curves in kCurveNames order.
struct CalibrationTarget {
  std::array<TargetCurve, kCurveCount> curves;

  // Throws DataError for an empty curve, a non-positive or non-increasing
  // grid, or an empty interval.
  void validate() const;
};

/// Builds a target from a computed curve set with no interval restriction.
CalibrationTarget target_from_curves(const stats::CurveSet& set);

std::array<const stats::StatCurve*, kCurveCount> curves_of(const stats::CurveSet& set);

enum class Aggregation { Max, Mean };

struct ObjectiveConfig {
  model::RunConfig run;           // run.seed is replaced per evaluation
  stats::CurveSettings curves;    // includes return_scale_divisor
  Aggregation aggregation = Aggregation::Max;
  int replicas = 1;               // model curves are averaged over replicas
  double penalty = 1e3;           // value for a curve without common support
  int threads = 1;                // replicas may run in parallel

  void validate() const;
};

struct ObjectiveValue {
  double value = 0.0;
  std::array<double, kCurveCount> rmse{};  // penalty where there was no support
  bool penalized = false;
};

/// Compares already computed model curves with the target.
ObjectiveValue score_curves(const stats::CurveSet& model, const CalibrationTarget& target,
                            Aggregation aggregation = Aggregation::Max, double penalty = 1e3);

/// Simulates `replicas` runs (seed, then derive_seed(seed, r) for r >= 1),
/// averages their
/// curves and scores them. A degenerate model series (frozen price, no
/// trades) is reported as the penalty, never thrown.
ObjectiveValue evaluate_objective(const model::ModelParams& params, const CalibrationTarget& target,
                                  const ObjectiveConfig& config, std::uint64_t seed);

double objective(const model::ModelParams& params, const CalibrationTarget& target, const ObjectiveConfig& config,
                 std::uint64_t seed);

struct ParamBound {
  double lo = 0.0;
  double hi = 0.0;
  bool frozen = true;
};

struct AnnealingConfig {
  model::ModelParams initial;
  std::map<std::string, ParamBound> bounds;  // by parameter name; missing names are frozen
  double initial_temperature = 0.05;
  double cooling = 0.98;                     // geometric, per iteration
  double proposal_scale = 0.3;
  int iterations = 300;
  std::uint64_t seed = 1;
  ObjectiveConfig objective;

  void validate() const;  // throws ConfigError
  bool is_free(const std::string& name) const;
};

/// Bounds of [value / 10, value * 10] for positive parameters, [0.01, 1] for
/// xi0 and [0, max(4, 2 alpha)] for alpha. n_agents, lambda_e, gamma_k,
/// gamma_theta and p_f start frozen, the rest free.
std::map<std::string, ParamBound> default_bounds(const model::ModelParams& initial);

struct TraceEntry {
  int iteration = 0;
  double temperature = 0.0;
  std::string parameter;   // the perturbed parameter, empty for iteration 0
  double proposed_value = 0.0;
  double objective = 0.0;  // of the proposal
  bool accepted = false;
  double current_objective = 0.0;
  double best_objective = 0.0;
};

struct AnnealResult {
  model::ModelParams best;
  double best_objective = 0.0;
  std::vector<TraceEntry> trace;
  int accepted = 0;
};

/// Metropolis simulated annealing. Iteration 0 scores the initial point with
/// the master seed;
/// iteration i >= 1 perturbs one free parameter chosen uniformly: positive
/// parameters by a factor exp(N(0, scale)), xi0 and parameters whose lower
/// bound is zero by N(0, scale) * (hi - lo). Values are clamped to bounds.
/// The objective of iteration i is evaluated with seed derive_seed(seed, i).
AnnealResult anneal(const AnnealingConfig& config, const CalibrationTarget& target);

}  // namespace herdbook::calibrate
