#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "herdbook/core/error.hpp"
#include "herdbook/model/engine.hpp"
#include "herdbook/model/market_state.hpp"
#include "herdbook/model/params.hpp"
#include "herdbook/model/simulation.hpp"
#include "herdbook/model/spread_book.hpp"

using namespace herdbook;
using namespace herdbook::model;

namespace {

ModelParams quiet_params() {
  ModelParams p = fig3_params();
  p.lambda_m = 0;
  p.lambda_tc = 0;
  p.lambda_tf = 0;
  return p;
}

// Rates of exactly (1, 1, 0, 0, 0): N = 2, one chartist, constant tau.
MarketState unit_switching_state(ModelParams& p) {
  p = quiet_params();
  p.n_agents = 2;
  p.alpha = 0;
  p.lambda_0 = 0;
  p.eps_cf = 1;
  p.eps_fc = 1;
  p.lambda_e = 0.5;
  const std::vector<double> spreads = {40};
  return MarketState::with_spreads(p, spreads, p.xi0, p.p_f);
}

double chi2_survival(double stat, int dof) { return boost::math::gamma_q(dof / 2.0, stat / 2.0); }

}  // namespace

TEST(TauInverse, Examples) {
  ModelParams p = fig3_params();
  p.n_agents = 500;
  p.lambda_0 = 0.1;
  p.alpha = 1;
  EXPECT_NEAR(tau_inverse(100, p), 0.35, 1e-12);
  EXPECT_NEAR(tau_inverse(500, p), 1000.1, 1e-9);
  p.lambda_0 = 0.4;
  p.alpha = 2;
  EXPECT_NEAR(tau_inverse(0, p), 0.4, 1e-12);
}

TEST(TauInverse, AlphaZeroPowerTermIsOne) {
  ModelParams p = fig3_params();
  p.alpha = 0;
  for (int n_c : {0, 1, 250, 500}) EXPECT_DOUBLE_EQ(tau_inverse(n_c, p), p.lambda_0 + 1.0);
}

TEST(EventRates, FundamentalistToChartistExample) {
  ModelParams p = fig3_params();
  std::vector<double> spreads(100, 40.0);
  const auto s = MarketState::with_spreads(p, spreads, p.xi0, p.p_f);
  const auto r = event_rates(s, p);
  EXPECT_NEAR(r[EventKind::SwitchFC], 1e-7 * 0.35 * 400 * 101, 1e-15);
  EXPECT_NEAR(r[EventKind::SwitchFC], 1.414e-3, 1e-6);
  EXPECT_EQ(r[EventKind::TradeFundamentalist], 0.0);
}

TEST(EventRates, NoChartists) {
  ModelParams p = fig3_params();
  const auto s = MarketState::with_spreads(p, {}, p.xi0, 31000);
  const auto r = event_rates(s, p);
  EXPECT_EQ(r[EventKind::TradeChartist], 0.0);
  EXPECT_EQ(r[EventKind::SwitchCF], 0.0);
  EXPECT_NEAR(r[EventKind::SwitchFC], p.lambda_e * tau_inverse(0, p) * p.n_agents * p.eps_fc, 1e-18);
  EXPECT_GT(r[EventKind::TradeFundamentalist], 0.0);
}

TEST(SelectEvent, SkipsZeroChannels) {
  EventRates r;
  r.values = {0, 2, 0, 0, 1};
  EXPECT_EQ(select_event(r, 0.0), EventKind::SwitchFC);
  EXPECT_EQ(select_event(r, 0.66), EventKind::SwitchFC);
  EXPECT_EQ(select_event(r, 0.67), EventKind::TradeChartist);
  EXPECT_EQ(select_event(r, std::nextafter(1.0, 0.0)), EventKind::TradeChartist);
}

TEST(SelectEvent, EqualRatesAreUniform) {
  EventRates r;
  r.values = {1, 1, 1, 1, 1};
  Rng rng(9);
  std::array<int, kEventKindCount> counts{};
  const int n = 100000;
  for (int i = 0; i < n; ++i) ++counts[static_cast<std::size_t>(select_event(r, rng.uniform()))];
  double stat = 0;
  for (int c : counts) stat += (c - n / 5.0) * (c - n / 5.0) / (n / 5.0);
  EXPECT_GT(chi2_survival(stat, 4), 0.001);
}

TEST(GillespieStep, MeanWaitingTime) {
  ModelParams p;
  const MarketState base = unit_switching_state(p);
  const auto r = event_rates(base, p);
  ASSERT_DOUBLE_EQ(r[EventKind::SwitchCF], 1.0);
  ASSERT_DOUBLE_EQ(r[EventKind::SwitchFC], 1.0);
  ASSERT_EQ(r.total(), 2.0);

  Rng rng(11);
  MarketState s = base;
  double sum = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) sum += gillespie_step(s, p, rng).dt;
  EXPECT_NEAR(sum / n, 0.5, 0.005);
  EXPECT_NEAR(s.t, sum, 1e-6 * sum);
}

TEST(GillespieStep, FrozenMarketThrows) {
  // No chartists and lambda_0 = 0 make the feedback term, and so every rate, vanish.
  ModelParams p = quiet_params();
  p.lambda_0 = 0;
  auto s = MarketState::with_spreads(p, {}, p.xi0, p.p_f);
  Rng rng(1);
  EXPECT_EQ(event_rates(s, p).total(), 0.0);
  EXPECT_THROW(gillespie_step(s, p, rng), FrozenMarketError);
}

TEST(GillespieStep, ChannelFrequenciesMatchRates) {
  ModelParams p = fig3_params();
  std::vector<double> spreads(200, 30.0);
  const auto base = MarketState::with_spreads(p, spreads, p.xi0, 30300);
  const auto r = event_rates(base, p);
  for (double v : r.values) ASSERT_GT(v, 0.0);

  Rng rng(12);
  MarketState s = base;
  std::array<double, kEventKindCount> counts{};
  const int n = 100000;
  for (int i = 0; i < n; ++i) ++counts[static_cast<std::size_t>(gillespie_step(s, p, rng).event)];
  double stat = 0;
  for (std::size_t k = 0; k < kEventKindCount; ++k) {
    const double expected = n * r.values[k] / r.total();
    stat += (counts[k] - expected) * (counts[k] - expected) / expected;
  }
  EXPECT_GT(chi2_survival(stat, 4), 0.001) << "chi2 = " << stat;
}

TEST(ApplyEvent, ChartistBuyHitsBestAsk) {
  ModelParams p = fig3_params();
  p.xi0 = 1.0;
  const std::vector<double> spreads = {60, 40, 50};
  auto s = MarketState::with_spreads(p, spreads, +1.0, 30000);
  Rng rng(1);
  EventCounters c;
  const auto trade = apply_event(s, EventKind::TradeChartist, p, rng, SpreadPolicy::RedrawOnExecution, &c);
  ASSERT_TRUE(trade);
  EXPECT_EQ(trade->side, Side::Buy);
  EXPECT_EQ(trade->initiator, Initiator::Chartist);
  EXPECT_DOUBLE_EQ(trade->price, 30040);
  EXPECT_DOUBLE_EQ(s.price, 30040);
  EXPECT_DOUBLE_EQ(s.valuation, 30040);
  EXPECT_NE(s.spreads.spread_of(1), 40.0);
  EXPECT_EQ(c.trades, 1u);
  EXPECT_TRUE(s.check_invariants());
}

TEST(ApplyEvent, ChartistSellHitsBestBid) {
  ModelParams p = fig3_params();
  p.xi0 = 1.0;
  auto s = MarketState::with_spreads(p, std::vector<double>{60, 40, 50}, -1.0, 30000);
  Rng rng(1);
  const auto trade = apply_event(s, EventKind::TradeChartist, p, rng);
  ASSERT_TRUE(trade);
  EXPECT_EQ(trade->side, Side::Sell);
  EXPECT_DOUBLE_EQ(trade->price, 29960);
}

TEST(ApplyEvent, FixedPolicyKeepsSpread) {
  ModelParams p = fig3_params();
  p.xi0 = 1.0;
  auto s = MarketState::with_spreads(p, std::vector<double>{60, 40, 50}, 1.0, 30000);
  Rng rng(1);
  apply_event(s, EventKind::TradeChartist, p, rng, SpreadPolicy::FixedPerTenure);
  EXPECT_DOUBLE_EQ(s.spreads.min_spread(), 40);
  apply_event(s, EventKind::TradeChartist, p, rng, SpreadPolicy::FixedPerTenure);
  EXPECT_DOUBLE_EQ(s.price, 30080);
}

TEST(ApplyEvent, NeutralMoodBuysHalfTheTime) {
  ModelParams p = fig3_params();
  const auto base = MarketState::with_spreads(p, std::vector<double>{40, 50}, 0.0, 30000);
  Rng rng(3);
  int buys = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    auto s = base;
    if (apply_event(s, EventKind::TradeChartist, p, rng)->side == Side::Buy) ++buys;
  }
  EXPECT_NEAR(static_cast<double>(buys) / n, 0.5, 0.015);
}

TEST(ApplyEvent, MoodSetsBuyProbability) {
  ModelParams p = fig3_params();
  const auto base = MarketState::with_spreads(p, std::vector<double>{40, 50}, 0.2, 30000);
  Rng rng(4);
  int buys = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    auto s = base;
    if (apply_event(s, EventKind::TradeChartist, p, rng)->side == Side::Buy) ++buys;
  }
  EXPECT_NEAR(static_cast<double>(buys) / n, 0.6, 0.015);
}

TEST(ApplyEvent, FundamentalistNullWhenSpreadStraddlesValue) {
  ModelParams p = fig3_params();
  auto s = MarketState::with_spreads(p, std::vector<double>{40}, p.xi0, 30000);
  s.price = 30500;
  Rng rng(1);
  EventCounters c;
  EXPECT_FALSE(apply_event(s, EventKind::TradeFundamentalist, p, rng, SpreadPolicy::RedrawOnExecution, &c));
  EXPECT_EQ(c.null_fundamentalist, 1u);
  EXPECT_DOUBLE_EQ(s.valuation, 30000);
}

TEST(ApplyEvent, FundamentalistTradesTowardValue) {
  ModelParams p = fig3_params();
  Rng rng(1);
  auto low = MarketState::with_spreads(p, std::vector<double>{40}, p.xi0, 29000);
  auto t = apply_event(low, EventKind::TradeFundamentalist, p, rng);
  ASSERT_TRUE(t);
  EXPECT_EQ(t->side, Side::Buy);
  EXPECT_EQ(t->initiator, Initiator::Fundamentalist);
  EXPECT_DOUBLE_EQ(t->price, 29040);

  auto high = MarketState::with_spreads(p, std::vector<double>{40}, p.xi0, 31000);
  t = apply_event(high, EventKind::TradeFundamentalist, p, rng);
  ASSERT_TRUE(t);
  EXPECT_EQ(t->side, Side::Sell);
  EXPECT_DOUBLE_EQ(t->price, 30960);
}

TEST(ApplyEvent, EmptyBookTradesAreNull) {
  ModelParams p = fig3_params();
  auto s = MarketState::with_spreads(p, {}, p.xi0, 31000);
  Rng rng(1);
  EventCounters c;
  EXPECT_FALSE(apply_event(s, EventKind::TradeChartist, p, rng, SpreadPolicy::RedrawOnExecution, &c));
  EXPECT_FALSE(apply_event(s, EventKind::TradeFundamentalist, p, rng, SpreadPolicy::RedrawOnExecution, &c));
  EXPECT_EQ(c.null_chartist, 1u);
  EXPECT_EQ(c.null_fundamentalist, 1u);
}

TEST(ApplyEvent, NonPositiveSellIsGuarded) {
  ModelParams p = fig3_params();
  p.xi0 = 1.0;
  auto s = MarketState::with_spreads(p, std::vector<double>{40}, -1.0, 30);
  Rng rng(1);
  EventCounters c;
  EXPECT_FALSE(apply_event(s, EventKind::TradeChartist, p, rng, SpreadPolicy::RedrawOnExecution, &c));
  EXPECT_EQ(c.guarded_sells, 1u);
  EXPECT_DOUBLE_EQ(s.price, 30);
}

TEST(ApplyEvent, SwitchingKeepsBookConsistent) {
  ModelParams p = fig3_params();
  Rng rng(5);
  auto s = MarketState::initial(p, rng);
  EXPECT_EQ(s.n_c, p.n_agents / 2);
  for (int i = 0; i < 2000; ++i) {
    const bool up = s.n_c == 0 || (s.n_c < s.n_agents && rng.bernoulli(0.5));
    apply_event(s, up ? EventKind::SwitchFC : EventKind::SwitchCF, p, rng);
    ASSERT_TRUE(s.check_invariants());
  }
  apply_event(s, EventKind::MoodFlip, p, rng);
  EXPECT_TRUE(s.mood == p.xi0 || s.mood == -p.xi0);
}

TEST(EquilibriumPrice, Examples) {
  ModelParams p = fig3_params();
  p.n_agents = 4;
  auto s = MarketState::with_spreads(p, std::vector<double>{1, 2}, 0.2, 30000);
  EXPECT_NEAR(equilibrium_price_orderbook(s, p), 3e4 * std::exp(0.2), 1e-6);
  EXPECT_NEAR(equilibrium_price_orderbook(s, p), 36642, 1.0);
  s.mood = 0.0;
  EXPECT_DOUBLE_EQ(equilibrium_price_orderbook(s, p), p.p_f);
  auto empty = MarketState::with_spreads(p, {}, 0.2, 30000);
  EXPECT_THROW(equilibrium_price_orderbook(empty, p), DomainError);
  auto full = MarketState::with_spreads(p, std::vector<double>{1, 2, 3, 4}, 0.2, 30000);
  EXPECT_THROW(equilibrium_price_orderbook(full, p), DomainError);
}

TEST(SpreadBookTest, MatchesReferenceMultiset) {
  SpreadBook book(64);
  std::map<int, double> ref;
  Rng rng(8);
  for (int i = 0; i < 20000; ++i) {
    const int agent = static_cast<int>(rng.below(64));
    const double spread = 1.0 + rng.uniform() * 100;
    if (ref.count(agent)) {
      if (rng.bernoulli(0.5)) {
        book.erase(agent);
        ref.erase(agent);
      } else {
        book.update(agent, spread);
        ref[agent] = spread;
      }
    } else {
      book.insert(agent, spread);
      ref[agent] = spread;
    }
    ASSERT_EQ(book.size(), ref.size());
    if (!ref.empty()) {
      const auto best = std::min_element(ref.begin(), ref.end(),
                                         [](const auto& a, const auto& b) { return a.second < b.second; });
      ASSERT_DOUBLE_EQ(book.min_spread(), best->second);
    }
  }
  EXPECT_TRUE(book.is_consistent());
  for (const auto& [agent, spread] : ref) EXPECT_DOUBLE_EQ(book.spread_of(agent), spread);
}

TEST(Engine, MatchesFreeFunctions) {
  const ModelParams p = fig3_params();
  Engine engine(p, 77);
  Rng rng(77);
  MarketState s = MarketState::initial(p, rng);
  for (int i = 0; i < 20000; ++i) {
    const auto a = engine.draw_step();
    const auto b = gillespie_step(s, p, rng);
    ASSERT_EQ(a.event, b.event);
    ASSERT_NEAR(a.dt, b.dt, 1e-9 * b.dt);
    const auto ta = engine.apply(a.event);
    const auto tb = apply_event(s, b.event, p, rng);
    ASSERT_EQ(ta.has_value(), tb.has_value());
    if (ta) {
      ASSERT_EQ(ta->price, tb->price);
    }
  }
  EXPECT_EQ(engine.state().n_c, s.n_c);
}

TEST(Engine, InvariantsHoldAlongARun) {
  Engine engine(fig3_params(), 3);
  for (int i = 0; i < 50000; ++i) {
    engine.apply(engine.draw_step().event);
    ASSERT_TRUE(engine.state().check_invariants()) << "event " << i;
  }
}

TEST(Simulation, NoTradeChannels) {
  ModelParams p = fig3_params();
  p.lambda_tc = 0;
  p.lambda_tf = 0;
  p.lambda_m = 0;
  RunConfig cfg;
  cfg.horizon_s = 1e6;
  const auto out = run_simulation(p, cfg);
  ASSERT_EQ(out.price.size(), 15000u);
  for (double v : out.price.values) ASSERT_EQ(v, p.p_f);
  for (double v : out.trades.values) ASSERT_EQ(v, 0.0);
  EXPECT_EQ(out.counters.trades, 0u);
}

TEST(Simulation, SameSeedIdenticalStream) {
  RunConfig cfg;
  cfg.horizon_s = 2e6;
  cfg.seed = 5;
  cfg.keep_trade_log = true;
  const auto a = run_simulation(fig3_params(), cfg);
  const auto b = run_simulation(fig3_params(), cfg);
  ASSERT_EQ(a.trade_log.size(), b.trade_log.size());
  for (std::size_t i = 0; i < a.trade_log.size(); ++i) {
    ASSERT_EQ(a.trade_log[i].t, b.trade_log[i].t);
    ASSERT_EQ(a.trade_log[i].price, b.trade_log[i].price);
  }
  EXPECT_EQ(a.price.values, b.price.values);
  EXPECT_EQ(a.trades.values, b.trades.values);
  cfg.seed = 6;
  const auto c = run_simulation(fig3_params(), cfg);
  EXPECT_NE(a.price.values, c.price.values);
}

TEST(Simulation, WindowsAndCounts) {
  RunConfig cfg;
  cfg.horizon_s = 1e6;
  cfg.burn_in_s = 4e5;
  cfg.keep_trade_log = true;
  const auto out = run_simulation(fig3_params(), cfg);
  ASSERT_EQ(out.price.size(), 10000u);
  EXPECT_DOUBLE_EQ(out.price.t0, 4e5);
  double total = 0;
  for (double v : out.trades.values) total += v;
  const auto in_range = std::count_if(out.trade_log.begin(), out.trade_log.end(),
                                      [](const TradeRecord& t) { return t.t > 4e5 && t.t <= 1e6; });
  EXPECT_EQ(total, static_cast<double>(in_range));
  EXPECT_GT(total, 0);
  EXPECT_EQ(out.n_c.size(), out.price.size());
}

TEST(Simulation, PriceIsLastTradeBeforeWindowEnd) {
  RunConfig cfg;
  cfg.horizon_s = 2e5;
  cfg.burn_in_s = 0.0;
  cfg.keep_trade_log = true;
  const auto out = run_simulation(fig3_params(), cfg);
  std::size_t j = 0;
  double last = fig3_params().p_f;
  for (std::size_t i = 0; i < out.price.size(); ++i) {
    const double end = out.price.time_at(i);
    while (j < out.trade_log.size() && out.trade_log[j].t <= end) last = out.trade_log[j++].price;
    ASSERT_EQ(out.price.values[i], last) << "window " << i;
  }
}

TEST(Simulation, RejectsBadConfig) {
  RunConfig cfg;
  cfg.horizon_s = -1;
  EXPECT_THROW(run_simulation(fig3_params(), cfg), ConfigError);
  cfg.horizon_s = 100;
  cfg.burn_in_s = 100;
  EXPECT_THROW(run_simulation(fig3_params(), cfg), ConfigError);
  ModelParams p = fig3_params();
  p.xi0 = 1.5;
  EXPECT_THROW(run_simulation(p, RunConfig{}), ConfigError);
}

TEST(Simulation, ModulatingSeriesUsesEdgeRule) {
  SimulationOutput out;
  out.price.sample_interval = 60;
  out.price.values = {1, 1, 1};
  out.n_c = {0, 250, 500};
  const auto y = modulating_return_series(out, 500);
  EXPECT_EQ(y.values, (std::vector<double>{0.0, 1.0, 1000.0}));
}

TEST(Params, NamedAccess) {
  ModelParams p = fig3_params();
  set_param(p, "eps_cf", 2.5);
  EXPECT_EQ(p.eps_cf, 2.5);
  EXPECT_EQ(get_param(p, "n_agents"), 500);
  EXPECT_THROW(set_param(p, "n_agents", 10.5), ConfigError);
  EXPECT_THROW(get_param(p, "bogus"), ConfigError);
  for (auto name : kParamNames) EXPECT_NO_THROW(get_param(p, name));
}

TEST(Params, ValidationNamesField) {
  ModelParams p = fig3_params();
  p.gamma_k = 0;
  try {
    p.validate();
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("gamma_k"), std::string::npos);
  }
}
