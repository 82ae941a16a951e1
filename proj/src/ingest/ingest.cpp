#include "herdbook/ingest/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <string>
#include <string_view>

#include "herdbook/core/error.hpp"
#include "herdbook/stats/compare.hpp"

namespace herdbook::ingest {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view line, char delimiter) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(delimiter, start);
    out.push_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

bool parse_time(std::string_view s, std::int64_t& out) {
  if (parse_number(s, out)) return true;
  // Whole seconds written with a fractional part, e.g. "1500000000.0".
  double d;
  if (!parse_number(s, d) || !std::isfinite(d) || std::abs(d) > 9e15) return false;
  out = static_cast<std::int64_t>(std::floor(d));
  return true;
}

}  // namespace

ParsedTicks parse_ticks(std::istream& in, const TickFormat& format) {
  const int max_col = std::max({format.time_column, format.price_column, format.amount_column});
  if (std::min({format.time_column, format.price_column, format.amount_column}) < 0)
    throw ConfigError("tick column indices must be nonnegative");
  if (format.time_column == format.price_column || format.time_column == format.amount_column ||
      format.price_column == format.amount_column)
    throw ConfigError("tick columns must be distinct");

  ParsedTicks out;
  std::string line;
  std::size_t line_no = 0;
  bool header_pending = format.header;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    if (header_pending) {
      header_pending = false;
      continue;
    }
    ++out.report.lines;
    const auto cols = split(line, format.delimiter);
    TickRecord r;
    const bool ok = static_cast<int>(cols.size()) > max_col && parse_time(cols[format.time_column], r.t) &&
                    parse_number(cols[format.price_column], r.price) &&
                    parse_number(cols[format.amount_column], r.amount) && std::isfinite(r.price) && r.price > 0 &&
                    std::isfinite(r.amount) && r.amount >= 0;
    if (!ok) {
      ++out.report.malformed;
      if (out.report.malformed_lines.size() < 20) out.report.malformed_lines.push_back(line_no);
      continue;
    }
    out.ticks.push_back(r);
  }

  if (out.report.lines == 0) throw DataError("tick input is empty");
  const double bad = static_cast<double>(out.report.malformed) / static_cast<double>(out.report.lines);
  if (bad > format.max_malformed_fraction) {
    std::string where;
    for (auto n : out.report.malformed_lines) where += (where.empty() ? "" : ", ") + std::to_string(n);
    throw DataError(std::to_string(out.report.malformed) + " of " + std::to_string(out.report.lines) +
                    " tick lines are malformed (first at lines " + where + ")");
  }
  if (out.report.malformed > 0) {
    out.report.warnings.push_back("skipped " + std::to_string(out.report.malformed) + " malformed tick lines");
  }
  const auto by_time = [](const TickRecord& a, const TickRecord& b) { return a.t < b.t; };
  if (!std::is_sorted(out.ticks.begin(), out.ticks.end(), by_time)) {
    std::stable_sort(out.ticks.begin(), out.ticks.end(), by_time);
    out.report.reordered = true;
    out.report.warnings.push_back("ticks were out of time order and have been sorted");
  }
  return out;
}

MinuteSeries to_minute_series(std::span<const TickRecord> ticks, std::int64_t t_start, std::int64_t t_end,
                              const MinuteOptions& options) {
  const double w = options.interval_s;
  if (!(w > 0) || !std::isfinite(w)) throw ConfigError("interval_s must be positive");
  if (t_end <= t_start) throw DataError("empty time range");
  const auto windows = static_cast<std::size_t>(std::floor(static_cast<double>(t_end - t_start) / w + 1e-9));
  if (windows == 0) throw DataError("time range is shorter than one window");
  const double start = static_cast<double>(t_start);

  std::size_t i = 0;
  std::optional<double> price;
  while (i < ticks.size() && ticks[i].t < t_start) price = ticks[i++].price;

  MinuteSeries out;
  out.price.kind = stats::SeriesKind::Price;
  out.trades.kind = stats::SeriesKind::Trades;
  out.price.sample_interval = out.trades.sample_interval = w;

  std::size_t in_range = 0;
  std::size_t trimmed = 0;
  for (std::size_t k = 0; k < windows; ++k) {
    const double end = start + static_cast<double>(k + 1) * w;
    std::size_t count = 0;
    while (i < ticks.size() && static_cast<double>(ticks[i].t) < end) {
      price = ticks[i++].price;
      ++count;
    }
    in_range += count;
    if (!price) {
      ++trimmed;
      continue;
    }
    if (options.drop_gaps && count == 0) continue;
    out.price.values.push_back(*price);
    out.trades.values.push_back(static_cast<double>(count));
  }
  if (in_range == 0) throw DataError("no ticks fall inside the requested time range");
  if (out.price.values.empty()) throw DataError("no complete window remains");
  out.price.t0 = out.trades.t0 = start + static_cast<double>(trimmed) * w;
  return out;
}

std::vector<TickRecord> ticks_from_trade_log(std::span<const model::TradeRecord> log) {
  std::vector<TickRecord> out;
  out.reserve(log.size());
  for (const auto& tr : log) out.push_back({static_cast<std::int64_t>(std::floor(tr.t)), tr.price, 1.0});
  return out;
}

calibrate::CalibrationTarget empirical_target(std::span<const MinuteSeries> assets,
                                              const stats::CurveSettings& settings) {
  if (assets.empty()) throw DataError("empirical target needs at least one asset");
  std::vector<stats::CurveSet> sets;
  sets.reserve(assets.size());
  for (const auto& a : assets) sets.push_back(stats::compute_curve_set(a.price, a.trades, settings));

  calibrate::CalibrationTarget target;
  for (std::size_t c = 0; c < calibrate::kCurveCount; ++c) {
    std::vector<stats::StatCurve> per_asset;
    for (const auto& s : sets) per_asset.push_back(*calibrate::curves_of(s)[c]);
    target.curves[c].curve = per_asset.size() == 1 ? per_asset.front() : stats::average_curves(per_asset);
  }
  return target;
}

}  // namespace herdbook::ingest
