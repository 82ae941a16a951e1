#include "herdbook/model/market_state.hpp"

#include <limits>

#include "herdbook/core/error.hpp"

namespace herdbook::model {

double draw_spread(const ModelParams& p, Rng& rng) {
  const double s = rng.gamma(p.gamma_k, p.gamma_theta);
  return s > 0 ? s : std::numeric_limits<double>::min();
}

namespace {

MarketState empty_state(const ModelParams& params, int n_chartists, double mood, double valuation) {
  MarketState s;
  s.n_agents = params.n_agents;
  s.n_c = n_chartists;
  s.mood = mood;
  s.valuation = valuation;
  s.price = valuation;
  s.spreads = SpreadBook(params.n_agents);
  s.fundamentalist_tags.reserve(static_cast<std::size_t>(params.n_agents));
  // Highest tags first so that pool.back() hands out the lowest free tag.
  for (int tag = params.n_agents - 1; tag >= n_chartists; --tag) s.fundamentalist_tags.push_back(tag);
  return s;
}

}  // namespace

MarketState MarketState::initial(const ModelParams& params, Rng& rng) {
  params.validate();
  MarketState s = empty_state(params, params.n_agents / 2, params.xi0, params.p_f);
  for (int tag = 0; tag < s.n_c; ++tag) s.spreads.insert(tag, draw_spread(params, rng));
  return s;
}

MarketState MarketState::with_spreads(const ModelParams& params, std::span<const double> spreads,
                                      double mood, double valuation) {
  params.validate();
  if (spreads.size() > static_cast<std::size_t>(params.n_agents))
    throw ConfigError("more spreads than agents");
  if (!(valuation > 0)) throw ConfigError("valuation must be positive");
  MarketState s = empty_state(params, static_cast<int>(spreads.size()), mood, valuation);
  for (std::size_t i = 0; i < spreads.size(); ++i) {
    if (!(spreads[i] > 0)) throw ConfigError("spreads must be positive");
    s.spreads.insert(static_cast<int>(i), spreads[i]);
  }
  return s;
}

bool MarketState::check_invariants() const {
  if (n_c < 0 || n_c > n_agents) return false;
  if (spreads.size() != static_cast<std::size_t>(n_c)) return false;
  if (fundamentalist_tags.size() != static_cast<std::size_t>(n_agents - n_c)) return false;
  if (!(price > 0) || !(valuation > 0)) return false;
  if (!spreads.empty() && !(best_ask() > best_bid())) return false;
  return spreads.is_consistent();
}

}  // namespace herdbook::model
