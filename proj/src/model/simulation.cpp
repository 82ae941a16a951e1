#include "herdbook/model/simulation.hpp"

#include <cmath>
#include <limits>

#include "herdbook/core/error.hpp"

namespace herdbook::model {

void RunConfig::validate() const {
  if (!(std::isfinite(horizon_s) && horizon_s > 0)) throw ConfigError("horizon_s must be positive");
  if (!(std::isfinite(sample_interval_s) && sample_interval_s > 0))
    throw ConfigError("sample_interval_s must be positive");
  const double b = burn_in();
  if (!(std::isfinite(b) && b >= 0 && b < horizon_s))
    throw ConfigError("burn_in_s must lie in [0, horizon_s)");
  if ((horizon_s - b) / sample_interval_s < 1)
    throw ConfigError("sample_interval_s is longer than the sampled span");
}

SimulationOutput run_simulation(const ModelParams& params, const RunConfig& config) {
  config.validate();
  Engine engine(params, config.seed, config.spread_policy);

  const double burn_in = config.burn_in();
  const double dt = config.sample_interval_s;
  const auto windows = static_cast<std::size_t>(std::floor((config.horizon_s - burn_in) / dt + 1e-9));

  SimulationOutput out;
  out.price = {dt, burn_in, {}, stats::SeriesKind::Price};
  out.trades = {dt, burn_in, {}, stats::SeriesKind::Trades};
  out.price.values.reserve(windows);
  out.trades.values.reserve(windows);
  out.n_c.reserve(windows);
  out.mood.reserve(windows);

  std::size_t next = 0;
  double in_window = 0.0;
  auto boundary = [&](std::size_t w) { return burn_in + static_cast<double>(w + 1) * dt; };
  auto close_windows_before = [&](double t) {
    const auto& s = engine.state();
    while (next < windows && boundary(next) < t) {
      out.price.values.push_back(s.price);
      out.trades.values.push_back(in_window);
      out.n_c.push_back(s.n_c);
      out.mood.push_back(s.mood);
      in_window = 0.0;
      ++next;
    }
  };

  for (;;) {
    StepDraw draw;
    try {
      draw = engine.draw_step();
    } catch (const FrozenMarketError&) {
      out.frozen = true;
      close_windows_before(std::numeric_limits<double>::infinity());
      break;
    }
    const double t = engine.state().t;
    close_windows_before(t);
    if (t >= config.horizon_s || next >= windows) break;
    if (auto trade = engine.apply(draw.event)) {
      if (t > burn_in) in_window += 1.0;
      if (config.keep_trade_log) out.trade_log.push_back(*trade);
    }
  }

  out.counters = engine.counters();
  out.final_time = engine.state().t;
  return out;
}

stats::SampledSeries modulating_return_series(const SimulationOutput& out, int n_agents) {
  stats::SampledSeries y{out.price.sample_interval, out.price.t0, {}, stats::SeriesKind::ModulatingReturn};
  y.values.reserve(out.n_c.size());
  for (int n_c : out.n_c) {
    y.values.push_back(n_c == n_agents ? 2.0 * n_agents
                                       : static_cast<double>(n_c) / static_cast<double>(n_agents - n_c));
  }
  return y;
}

stats::SampledSeries equilibrium_price_series(const SimulationOutput& out, const ModelParams& params) {
  stats::SampledSeries p{out.price.sample_interval, out.price.t0, {}, stats::SeriesKind::Price};
  p.values.reserve(out.n_c.size());
  const double ratio = params.lambda_tf > 0 ? params.lambda_tc / params.lambda_tf
                                            : std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < out.n_c.size(); ++i) {
    const int n_c = out.n_c[i];
    if (n_c <= 0 || n_c >= params.n_agents) {
      p.values.push_back(std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    const double y = static_cast<double>(n_c) / static_cast<double>(params.n_agents - n_c);
    p.values.push_back(params.p_f * std::exp(ratio * y * out.mood[i]));
  }
  return p;
}

}  // namespace herdbook::model
