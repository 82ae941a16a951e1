#include "herdbook/model/engine.hpp"

#include <cassert>
#include <cmath>
#include <string>

#include "herdbook/core/error.hpp"

namespace herdbook::model {

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::SwitchCF: return "switch_cf";
    case EventKind::SwitchFC: return "switch_fc";
    case EventKind::MoodFlip: return "mood_flip";
    case EventKind::TradeFundamentalist: return "trade_fundamentalist";
    case EventKind::TradeChartist: return "trade_chartist";
  }
  return "unknown";
}

double EventRates::total() const {
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum;
}

double tau_inverse(int n_c, const ModelParams& params) {
  const int n = params.n_agents;
  assert(n_c >= 0 && n_c <= n);
  if (params.alpha == 0.0) return params.lambda_0 + 1.0;
  if (n_c == n) return params.lambda_0 + std::pow(2.0 * n_c, params.alpha);
  if (n_c == 0) return params.lambda_0;
  const double y = static_cast<double>(n_c) / static_cast<double>(n - n_c);
  return params.lambda_0 + std::pow(y, params.alpha);
}

namespace {

EventRates rates_from(double scale, int n_c, int n, double abs_log_deviation, const ModelParams& p) {
  const double nc = n_c;
  const double nf = n - n_c;
  EventRates r;
  r[EventKind::SwitchCF] = scale * nc * (p.eps_cf + nf);
  r[EventKind::SwitchFC] = scale * nf * (p.eps_fc + nc);
  r[EventKind::MoodFlip] = scale * p.lambda_m;
  r[EventKind::TradeFundamentalist] = scale * p.lambda_tf * nf * abs_log_deviation;
  r[EventKind::TradeChartist] = scale * p.lambda_tc * nc;
  return r;
}

}  // namespace

EventRates event_rates(const MarketState& state, const ModelParams& params) {
  const double scale = params.lambda_e * tau_inverse(state.n_c, params);
  return rates_from(scale, state.n_c, state.n_agents, std::abs(std::log(state.price / params.p_f)),
                    params);
}

EventKind select_event(const EventRates& rates, double u) {
  const double target = u * rates.total();
  double cumulative = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < kEventKindCount; ++i) {
    if (rates.values[i] <= 0.0) continue;
    cumulative += rates.values[i];
    last_positive = i;
    if (target < cumulative) return static_cast<EventKind>(i);
  }
  // Rounding can leave target == total; fall back to the last live channel.
  return static_cast<EventKind>(last_positive);
}

namespace {

StepDraw draw_from(const EventRates& rates, MarketState& state, Rng& rng) {
  const double total = rates.total();
  if (!(total > 0.0))
    throw FrozenMarketError("all event rates are zero at t = " + std::to_string(state.t));
  const double dt = rng.exponential(total);
  const EventKind event = select_event(rates, rng.uniform());
  state.t += dt;
  return {dt, event};
}

std::optional<TradeRecord> execute(MarketState& state, bool buy, Initiator initiator,
                                   const ModelParams& params, Rng& rng, SpreadPolicy policy,
                                   EventCounters* counters) {
  const double quote = buy ? state.best_ask() : state.best_bid();
  if (!(quote > 0.0)) {
    if (counters) ++counters->guarded_sells;
    return std::nullopt;
  }
  state.price = quote;
  state.valuation = quote;
  if (policy == SpreadPolicy::RedrawOnExecution)
    state.spreads.update(state.spreads.min_agent(), draw_spread(params, rng));
  if (counters) ++counters->trades;
  return TradeRecord{state.t, quote, buy ? Side::Buy : Side::Sell, initiator};
}

}  // namespace

StepDraw gillespie_step(MarketState& state, const ModelParams& params, Rng& rng) {
  return draw_from(event_rates(state, params), state, rng);
}

std::optional<TradeRecord> apply_event(MarketState& state, EventKind event, const ModelParams& params,
                                       Rng& rng, SpreadPolicy policy, EventCounters* counters) {
  if (counters) ++counters->events[static_cast<std::size_t>(event)];
  switch (event) {
    case EventKind::SwitchFC: {
      assert(state.n_c < state.n_agents);
      const int tag = state.fundamentalist_tags.back();
      state.fundamentalist_tags.pop_back();
      state.spreads.insert(tag, draw_spread(params, rng));
      ++state.n_c;
      return std::nullopt;
    }
    case EventKind::SwitchCF: {
      assert(state.n_c > 0);
      const auto index = rng.below(state.spreads.size());
      const int tag = state.spreads.entry_at(index).agent;
      state.spreads.erase(tag);
      state.fundamentalist_tags.push_back(tag);
      --state.n_c;
      return std::nullopt;
    }
    case EventKind::MoodFlip:
      state.mood = -state.mood;
      return std::nullopt;
    case EventKind::TradeChartist: {
      if (state.book_empty()) {
        if (counters) ++counters->null_chartist;
        return std::nullopt;
      }
      const bool buy = rng.bernoulli(0.5 * (1.0 + state.mood));
      return execute(state, buy, Initiator::Chartist, params, rng, policy, counters);
    }
    case EventKind::TradeFundamentalist: {
      if (!state.book_empty()) {
        if (state.best_ask() < params.p_f)
          return execute(state, true, Initiator::Fundamentalist, params, rng, policy, counters);
        if (state.best_bid() > params.p_f)
          return execute(state, false, Initiator::Fundamentalist, params, rng, policy, counters);
      }
      if (counters) ++counters->null_fundamentalist;
      return std::nullopt;
    }
  }
  return std::nullopt;
}

double equilibrium_price_orderbook(const MarketState& state, const ModelParams& params) {
  if (state.n_c <= 0 || state.n_c >= state.n_agents)
    throw DomainError("equilibrium price needs 0 < n_c < N, got n_c = " + std::to_string(state.n_c));
  if (!(params.lambda_tf > 0)) throw DomainError("equilibrium price needs lambda_tf > 0");
  const double y = static_cast<double>(state.n_c) / static_cast<double>(state.n_agents - state.n_c);
  return params.p_f * std::exp(params.lambda_tc / params.lambda_tf * y * state.mood);
}

Engine::Engine(const ModelParams& params, std::uint64_t seed, SpreadPolicy policy)
    : params_(params), rng_(seed), policy_(policy) {
  params_.validate();
  state_ = MarketState::initial(params_, rng_);
  tau_inv_.resize(static_cast<std::size_t>(params_.n_agents) + 1);
  for (int n_c = 0; n_c <= params_.n_agents; ++n_c)
    tau_inv_[static_cast<std::size_t>(n_c)] = tau_inverse(n_c, params_);
  refresh_price_cache();
}

Engine::Engine(const ModelParams& params, MarketState initial, std::uint64_t seed, SpreadPolicy policy)
    : params_(params), rng_(seed), state_(std::move(initial)), policy_(policy) {
  params_.validate();
  if (state_.n_agents != params_.n_agents || !state_.check_invariants())
    throw ConfigError("initial market state is inconsistent with the parameters");
  tau_inv_.resize(static_cast<std::size_t>(params_.n_agents) + 1);
  for (int n_c = 0; n_c <= params_.n_agents; ++n_c)
    tau_inv_[static_cast<std::size_t>(n_c)] = tau_inverse(n_c, params_);
  refresh_price_cache();
}

void Engine::refresh_price_cache() { abs_log_deviation_ = std::abs(std::log(state_.price / params_.p_f)); }

EventRates Engine::rates() const {
  const double scale = params_.lambda_e * tau_inv_[static_cast<std::size_t>(state_.n_c)];
  return rates_from(scale, state_.n_c, state_.n_agents, abs_log_deviation_, params_);
}

StepDraw Engine::draw_step() { return draw_from(rates(), state_, rng_); }

std::optional<TradeRecord> Engine::apply(EventKind event) {
  auto trade = apply_event(state_, event, params_, rng_, policy_, &counters_);
  if (trade) refresh_price_cache();
  return trade;
}

}  // namespace herdbook::model
