#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "herdbook/core/rng.hpp"
#include "herdbook/model/market_state.hpp"
#include "herdbook/model/params.hpp"

namespace herdbook::model {

enum class EventKind : std::uint8_t {
  SwitchCF,             // a random chartist becomes a fundamentalist
  SwitchFC,             // a fundamentalist becomes a chartist
  MoodFlip,
  TradeFundamentalist,
  TradeChartist,
};
inline constexpr std::size_t kEventKindCount = 5;

std::string_view to_string(EventKind kind);

/// Market order direction. Buy orders execute at the best ask.
enum class Side : std::uint8_t { Buy, Sell };
enum class Initiator : std::uint8_t { Chartist, Fundamentalist };

struct TradeRecord {
  double t;       // seconds
  double price;   // executed quote
  Side side;
  Initiator initiator;
};

/// What happens to the spread of the agent whose quote was hit.
enum class SpreadPolicy : std::uint8_t {
  RedrawOnExecution,  // a fresh Gamma(k, theta) spread after every execution
  FixedPerTenure,     // S_i is kept for as long as the agent stays a chartist
};

/// Channel rates in 1/s, indexed in EventKind order.
struct EventRates {
  std::array<double, kEventKindCount> values{};

  double operator[](EventKind kind) const { return values[static_cast<std::size_t>(kind)]; }
  double& operator[](EventKind kind) { return values[static_cast<std::size_t>(kind)]; }
  double total() const;
};

struct EventCounters {
  std::array<std::uint64_t, kEventKindCount> events{};
  std::uint64_t trades = 0;
  std::uint64_t null_fundamentalist = 0;  // P_f inside the spread, or empty book
  std::uint64_t null_chartist = 0;        // empty book
  std::uint64_t guarded_sells = 0;        // sell quote would have been <= 0

  std::uint64_t count(EventKind kind) const { return events[static_cast<std::size_t>(kind)]; }
};

/// Feedback term 1/tau: lambda_0 + (n_c / (N - n_c))^alpha, with
/// (2 N)^alpha at n_c = N and a power term of 1 everywhere when alpha = 0.
double tau_inverse(int n_c, const ModelParams& params);

EventRates event_rates(const MarketState& state, const ModelParams& params);

/// Picks the channel whose cumulative rate interval contains u * total.
/// u in [0, 1). Zero-rate channels are never chosen.
EventKind select_event(const EventRates& rates, double u);

struct StepDraw {
  double dt;
  EventKind event;
};

/// Draws the waiting time and the next event, and advances state.t.
/// The event itself is not applied. Throws FrozenMarketError if every rate
/// is zero.
StepDraw gillespie_step(MarketState& state, const ModelParams& params, Rng& rng);

/// Applies an event drawn by gillespie_step. Returns the executed trade, if
/// any. Switching past the population bounds is a logic error (asserted).
std::optional<TradeRecord> apply_event(MarketState& state, EventKind event, const ModelParams& params,
                                       Rng& rng, SpreadPolicy policy = SpreadPolicy::RedrawOnExecution,
                                       EventCounters* counters = nullptr);

/// Equilibrium price of the order book, assuming a non-empty and roughly
/// uniformly filled book: P_f exp((lambda_tc / lambda_tf) y xi).
/// Throws DomainError for n_c in {0, N} or lambda_tf = 0.
double equilibrium_price_orderbook(const MarketState& state, const ModelParams& params);

/// Owns one model run: parameters, state, random stream and counters.
///
/// Same arithmetic as the free functions, with 1/tau tabulated per n_c and
/// |ln(P / P_f)| cached between trades.
class Engine {
 public:
  Engine(const ModelParams& params, std::uint64_t seed,
         SpreadPolicy policy = SpreadPolicy::RedrawOnExecution);
  Engine(const ModelParams& params, MarketState initial, std::uint64_t seed,
         SpreadPolicy policy = SpreadPolicy::RedrawOnExecution);

  const ModelParams& params() const { return params_; }
  const MarketState& state() const { return state_; }
  const EventCounters& counters() const { return counters_; }
  SpreadPolicy policy() const { return policy_; }

  EventRates rates() const;
  StepDraw draw_step();
  std::optional<TradeRecord> apply(EventKind event);

 private:
  void refresh_price_cache();

  ModelParams params_;
  Rng rng_;
  MarketState state_;
  SpreadPolicy policy_;
  EventCounters counters_;
  std::vector<double> tau_inv_;
  double abs_log_deviation_ = 0.0;
};

}  // namespace herdbook::model
