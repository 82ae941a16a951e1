#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "herdbook/calibrate/calibrate.hpp"
#include "herdbook/ingest/ingest.hpp"
#include "herdbook/model/engine.hpp"
#include "herdbook/stats/curve.hpp"
#include "herdbook/stats/series.hpp"

namespace herdbook::io {

namespace fs = std::filesystem;

/// `t_s,price,trades`, one row per window, t_s at the window end.
void write_series_csv(const fs::path& path, const stats::SampledSeries& price, const stats::SampledSeries& trades);

/// Reads a series file back. The sample interval is the spacing of the first
/// two rows (60 s for a single row). Throws DataError for a bad header, a
/// malformed row or an empty file.
ingest::MinuteSeries read_series_csv(const fs::path& path);

/// `t_s,price,side,initiator` with side buy/sell and initiator chartist/fundamentalist.
void write_trade_log_csv(const fs::path& path, std::span<const model::TradeRecord> log);

/// Generic single-column series, `t_s,value`.
void write_values_csv(const fs::path& path, const stats::SampledSeries& series);

/// `<stem>.csv` with `grid,value` rows plus `<stem>.json` holding the kind and
/// metadata (and the comparison interval when given).
void write_curve(const fs::path& stem, const stats::StatCurve& curve,
                 const std::optional<std::pair<double, double>>& interval = std::nullopt);
stats::StatCurve read_curve(const fs::path& stem, std::optional<std::pair<double, double>>* interval = nullptr);

/// The four curves as return_pdf.{csv,json} ... activity_psd.{csv,json}.
std::vector<fs::path> write_target(const fs::path& dir, const calibrate::CalibrationTarget& target);
calibrate::CalibrationTarget read_target(const fs::path& dir);

/// 64-bit FNV-1a of the file content as 16 hex digits.
std::string file_checksum(const fs::path& path);

struct RunManifest {
  std::string command;
  std::map<std::string, std::string> config;
  std::uint64_t seed = 0;
  std::string version;
  std::string started;  // UTC, ISO 8601
  std::string finished;
  std::vector<fs::path> outputs;  // relative to the manifest directory
};

std::string utc_now();

/// Writes `manifest.json` into `dir` through a temporary file and a rename,
/// with the checksum of every listed output.
void write_manifest(const fs::path& dir, const RunManifest& manifest);

/// Writes text through a temporary file and a rename.
void write_text_atomic(const fs::path& path, const std::string& text);

}  // namespace herdbook::io
