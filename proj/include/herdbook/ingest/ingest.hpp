#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "herdbook/calibrate/calibrate.hpp"
#include "herdbook/model/engine.hpp"
#include "herdbook/stats/pipeline.hpp"
#include "herdbook/stats/series.hpp"

namespace herdbook::ingest {

struct TickRecord {
  std::int64_t t = 0;   // unix seconds
  double price = 0.0;   // > 0
  double amount = 0.0;  // >= 0, not used for activity

  friend bool operator==(const TickRecord&, const TickRecord&) = default;
};

/// Column layout of a tick file. Columns are zero-based.
struct TickFormat {
  bool header = false;
  int time_column = 0;
  int price_column = 1;
  int amount_column = 2;
  char delimiter = ',';
  double max_malformed_fraction = 0.01;
};

struct ParseReport {
  std::size_t lines = 0;      // non-blank data lines
  std::size_t malformed = 0;
  std::vector<std::size_t> malformed_lines;  // 1-based, first 20 only
  bool reordered = false;     // input was not sorted by time
  std::vector<std::string> warnings;
};

struct ParsedTicks {
  std::vector<TickRecord> ticks;
  ParseReport report;
};

/// Reads `unixtime,price,amount` style lines (blank lines ignored). Bad lines
/// (wrong column count, unparsable numbers, price <= 0, negative amount) are
/// skipped and counted. Throws DataError for empty input or when more than
/// max_malformed_fraction of the lines are bad. The result is stably sorted
/// by time, with a warning if the input was out of order.
ParsedTicks parse_ticks(std::istream& in, const TickFormat& format = {});

struct MinuteOptions {
  double interval_s = 60.0;
  bool drop_gaps = false;  // remove windows without trades
};

struct MinuteSeries {
  stats::SampledSeries price;
  stats::SampledSeries trades;
};

/// Bars over [t_start, t_end) in windows [t_start + k w, t_start + (k + 1) w),
/// complete windows only. trades = ticks per window, price = last tick before
/// the window end, forward-filled; ticks before t_start provide the opening
/// price. Windows before the first known price are trimmed. With drop_gaps the
/// windows without trades are removed. Throws DataError when no tick falls in
/// range or no complete window remains. Expects sorted ticks.
MinuteSeries to_minute_series(std::span<const TickRecord> ticks, std::int64_t t_start, std::int64_t t_end,
                              const MinuteOptions& options = {});

/// Ticks from a simulated trade log: time rounded down to whole seconds,
/// amount 1.
std::vector<TickRecord> ticks_from_trade_log(std::span<const model::TradeRecord> log);

/// Curves per asset, averaged across assets, with no comparison interval.
calibrate::CalibrationTarget empirical_target(std::span<const MinuteSeries> assets,
                                              const stats::CurveSettings& settings = {});

}  // namespace herdbook::ingest
