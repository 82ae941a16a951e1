#include "herdbook/calibrate/calibrate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "herdbook/core/error.hpp"
#include "herdbook/core/parallel.hpp"
#include "herdbook/core/rng.hpp"
#include "herdbook/stats/compare.hpp"

namespace herdbook::calibrate {

void CalibrationTarget::validate() const {
  for (std::size_t i = 0; i < kCurveCount; ++i) {
    const auto& [curve, interval] = curves[i];
    const std::string name = kCurveNames[i];
    if (curve.empty()) throw DataError("target curve " + name + " is empty");
    if (curve.values.size() != curve.grid.size())
      throw DataError("target curve " + name + " has mismatched grid and values");
    for (std::size_t j = 0; j < curve.size(); ++j) {
      if (!(curve.grid[j] > 0) || (j > 0 && !(curve.grid[j] > curve.grid[j - 1])))
        throw DataError("target curve " + name + " needs a positive increasing grid");
    }
    if (interval && !(interval->first < interval->second))
      throw DataError("target curve " + name + " has an empty comparison interval");
  }
}

std::array<const stats::StatCurve*, kCurveCount> curves_of(const stats::CurveSet& set) {
  return {&set.return_pdf, &set.return_psd, &set.activity_pdf, &set.activity_psd};
}

CalibrationTarget target_from_curves(const stats::CurveSet& set) {
  CalibrationTarget target;
  const auto src = curves_of(set);
  for (std::size_t i = 0; i < kCurveCount; ++i) target.curves[i].curve = *src[i];
  return target;
}

void ObjectiveConfig::validate() const {
  run.validate();
  if (replicas < 1) throw ConfigError("replicas must be at least 1");
  if (!(penalty > 0) || !std::isfinite(penalty)) throw ConfigError("penalty must be positive and finite");
  if (!(curves.return_scale_divisor > 0)) throw ConfigError("return_scale_divisor must be positive");
}

ObjectiveValue score_curves(const stats::CurveSet& model, const CalibrationTarget& target, Aggregation aggregation,
                            double penalty) {
  ObjectiveValue out;
  const auto m = curves_of(model);
  double sum = 0;
  double worst = 0;
  for (std::size_t i = 0; i < kCurveCount; ++i) {
    const auto r = stats::curve_rmse(*m[i], target.curves[i].curve, target.curves[i].interval);
    out.rmse[i] = r.value_or(penalty);
    if (!r) out.penalized = true;
    sum += out.rmse[i];
    worst = std::max(worst, out.rmse[i]);
  }
  out.value = aggregation == Aggregation::Max ? worst : sum / kCurveCount;
  return out;
}

namespace {

ObjectiveValue penalty_value(double penalty) {
  ObjectiveValue v;
  v.value = penalty;
  v.rmse.fill(penalty);
  v.penalized = true;
  return v;
}

}  // namespace

ObjectiveValue evaluate_objective(const model::ModelParams& params, const CalibrationTarget& target,
                                  const ObjectiveConfig& config, std::uint64_t seed) {
  config.validate();
  params.validate();

  const auto n = static_cast<std::size_t>(config.replicas);
  std::vector<std::optional<stats::CurveSet>> sets(n);
  parallel_for(n, config.threads, [&](std::size_t r) {
    model::RunConfig run = config.run;
    run.seed = r == 0 ? seed : derive_seed(seed, r);
    const auto out = model::run_simulation(params, run);
    try {
      sets[r] = stats::compute_curve_set(out.price, out.trades, config.curves);
    } catch (const DegenerateSeriesError&) {
    } catch (const DataError&) {
    }
  });
  if (std::any_of(sets.begin(), sets.end(), [](const auto& s) { return !s; })) return penalty_value(config.penalty);
  if (n == 1) return score_curves(*sets.front(), target, config.aggregation, config.penalty);

  stats::CurveSet mean;
  auto dst = std::array{&mean.return_pdf, &mean.return_psd, &mean.activity_pdf, &mean.activity_psd};
  try {
    for (std::size_t i = 0; i < kCurveCount; ++i) {
      std::vector<stats::StatCurve> replicas;
      for (const auto& s : sets) replicas.push_back(*curves_of(*s)[i]);
      *dst[i] = stats::average_curves(replicas);
    }
  } catch (const DataError&) {
    return penalty_value(config.penalty);
  }
  return score_curves(mean, target, config.aggregation, config.penalty);
}

double objective(const model::ModelParams& params, const CalibrationTarget& target, const ObjectiveConfig& config,
                 std::uint64_t seed) {
  return evaluate_objective(params, target, config, seed).value;
}

bool AnnealingConfig::is_free(const std::string& name) const {
  const auto it = bounds.find(name);
  return it != bounds.end() && !it->second.frozen;
}

void AnnealingConfig::validate() const {
  initial.validate();
  objective.validate();
  if (!(initial_temperature > 0) || !std::isfinite(initial_temperature))
    throw ConfigError("initial_temperature must be positive");
  if (!(cooling > 0 && cooling < 1)) throw ConfigError("cooling must lie in (0, 1)");
  if (!(proposal_scale > 0) || !std::isfinite(proposal_scale)) throw ConfigError("proposal_scale must be positive");
  if (iterations < 0) throw ConfigError("iterations must be nonnegative");
  bool any_free = false;
  for (const auto& [name, b] : bounds) {
    if (!model::is_param_name(name)) throw ConfigError("bounds given for unknown parameter '" + name + "'");
    if (b.frozen) continue;
    any_free = true;
    if (!std::isfinite(b.lo) || !std::isfinite(b.hi) || b.lo > b.hi)
      throw ConfigError("bounds for " + name + " must satisfy lo <= hi");
    const double v = model::get_param(initial, name);
    if (v < b.lo || v > b.hi) throw ConfigError("initial " + name + " lies outside its bounds");
  }
  if (iterations > 0 && !any_free) throw ConfigError("no free parameters to anneal");
}

std::map<std::string, ParamBound> default_bounds(const model::ModelParams& initial) {
  std::map<std::string, ParamBound> out;
  for (auto name_view : model::kParamNames) {
    const std::string name(name_view);
    const double v = model::get_param(initial, name);
    ParamBound b{v, v, false};
    if (name == "xi0") {
      b.lo = std::min(0.01, v);
      b.hi = 1.0;
    } else if (name == "alpha") {
      b.lo = 0.0;
      b.hi = std::max(4.0, 2 * v);
    } else if (v > 0) {
      b.lo = v / 10;
      b.hi = v * 10;
    } else {
      b.lo = 0.0;
      b.hi = 1.0;
    }
    b.frozen = name == "n_agents" || name == "lambda_e" || name == "gamma_k" || name == "gamma_theta" ||
               name == "p_f";
    out[name] = b;
  }
  return out;
}

namespace {

double propose(const std::string& name, double value, const ParamBound& b, double scale, Rng& rng) {
  const bool additive = name == "xi0" || !(b.lo > 0) || !(value > 0);
  double v = additive ? value + rng.normal() * scale * (b.hi - b.lo) : value * std::exp(rng.normal() * scale);
  v = std::clamp(v, b.lo, b.hi);
  if (name == "n_agents") v = std::clamp(std::round(v), std::max(1.0, std::ceil(b.lo)), std::floor(b.hi));
  return v;
}

}  // namespace

AnnealResult anneal(const AnnealingConfig& config, const CalibrationTarget& target) {
  config.validate();
  target.validate();

  std::vector<std::string> free;
  for (auto name : model::kParamNames) {
    if (config.is_free(std::string(name))) free.emplace_back(name);
  }

  Rng rng(config.seed);
  AnnealResult result;
  model::ModelParams current = config.initial;
  double current_obj = objective(current, target, config.objective, config.seed);
  result.best = current;
  result.best_objective = current_obj;
  result.trace.push_back({0, config.initial_temperature, "", 0.0, current_obj, true, current_obj, current_obj});

  double temperature = config.initial_temperature;
  for (int i = 1; i <= config.iterations; ++i) {
    const std::string& name = free[rng.below(free.size())];
    const ParamBound& bound = config.bounds.at(name);
    model::ModelParams candidate = current;
    const double value = propose(name, model::get_param(current, name), bound, config.proposal_scale, rng);
    model::set_param(candidate, name, value);

    double obj;
    try {
      obj = objective(candidate, target, config.objective, derive_seed(config.seed, static_cast<std::uint64_t>(i)));
    } catch (const ConfigError&) {
      obj = config.objective.penalty;
    }
    const double u = rng.uniform();
    const bool accept = obj <= current_obj || u < std::exp(-(obj - current_obj) / temperature);
    if (accept) {
      current = candidate;
      current_obj = obj;
      ++result.accepted;
    }
    if (obj < result.best_objective) {
      result.best = candidate;
      result.best_objective = obj;
    }
    result.trace.push_back({i, temperature, name, value, obj, accept, current_obj, result.best_objective});
    temperature *= config.cooling;
  }
  return result;
}

}  // namespace herdbook::calibrate
