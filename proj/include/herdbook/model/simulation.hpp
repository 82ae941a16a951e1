#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "herdbook/model/engine.hpp"
#include "herdbook/model/params.hpp"
#include "herdbook/stats/series.hpp"

namespace herdbook::model {

struct RunConfig {
  double horizon_s = 1e7;
  double sample_interval_s = 60.0;
  std::optional<double> burn_in_s;  // defaults to 10% of the horizon
  std::uint64_t seed = 1;
  SpreadPolicy spread_policy = SpreadPolicy::RedrawOnExecution;
  bool keep_trade_log = false;  // the log covers the whole run, burn-in included

  double burn_in() const { return burn_in_s.value_or(0.1 * horizon_s); }
  // Throws ConfigError for a non-positive horizon or interval, or a burn-in
  // outside [0, horizon).
  void validate() const;
};

struct SimulationOutput {
  stats::SampledSeries price;   // last trade at or before each window end
  stats::SampledSeries trades;  // executed trades per window
  std::vector<int> n_c;         // chartists at each window end
  std::vector<double> mood;     // mood at each window end
  std::vector<TradeRecord> trade_log;
  EventCounters counters;
  double final_time = 0.0;
  bool frozen = false;          // every rate vanished before the horizon
};

/// Runs the Gillespie loop from the initial state until the clock passes the
/// horizon and samples the uniform grid that starts at the burn-in time.
/// Identical (params, config) give bit-identical output.
SimulationOutput run_simulation(const ModelParams& params, const RunConfig& config);

/// y = N_c / (N - N_c) per window, with y = 2N when every agent is a chartist
/// (the same edge rule as the feedback term).
stats::SampledSeries modulating_return_series(const SimulationOutput& out, int n_agents);

/// Equilibrium price per window; NaN where it is undefined (n_c in {0, N}).
stats::SampledSeries equilibrium_price_series(const SimulationOutput& out, const ModelParams& params);

}  // namespace herdbook::model
