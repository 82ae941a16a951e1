#pragma once

#include <span>
#include <vector>

#include "herdbook/core/rng.hpp"
#include "herdbook/model/params.hpp"
#include "herdbook/model/spread_book.hpp"

namespace herdbook::model {

// Gamma(k, theta) spread, clamped away from an underflowed zero.
double draw_spread(const ModelParams& params, Rng& rng);

/// Full state of the order book model.
///
/// Every chartist quotes valuation +/- S_i with unit volume on both sides, so
/// the book is fully described by the spread collection and the shared
/// valuation. Agents without quotes are fundamentalists; their tags are kept
/// in a pool so that a switching fundamentalist can take a free tag.
struct MarketState {
  double t = 0.0;            // seconds
  int n_agents = 0;          // N
  int n_c = 0;               // chartists
  double mood = 0.0;         // +xi0 or -xi0
  double valuation = 0.0;    // shared V(t)
  double price = 0.0;        // last transaction price P(t)
  SpreadBook spreads;
  std::vector<int> fundamentalist_tags;

  /// N_c = N/2 (rounded down), mood = +xi0, valuation = price = P_f and
  /// i.i.d. Gamma(k, theta) spreads for the initial chartists.
  static MarketState initial(const ModelParams& params, Rng& rng);

  /// State with one chartist per given spread (n_c = spreads.size()).
  static MarketState with_spreads(const ModelParams& params, std::span<const double> spreads,
                                  double mood, double valuation);

  int n_fundamentalists() const { return n_agents - n_c; }
  bool book_empty() const { return spreads.empty(); }

  // Book must be non-empty.
  double best_ask() const { return valuation + spreads.min_spread(); }
  double best_bid() const { return valuation - spreads.min_spread(); }

  /// Occupancy, conservation, positivity and heap consistency.
  bool check_invariants() const;
};

}  // namespace herdbook::model
