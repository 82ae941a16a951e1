#include "herdbook/io/files.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "herdbook/core/error.hpp"
#include "herdbook/io/config.hpp"
#include "herdbook/stats/transforms.hpp"

namespace herdbook::io {

using nlohmann::json;

namespace {

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  return out;
}

std::ifstream open_in(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  return in;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string strip_cr(std::string s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

double number(const std::string& cell, const fs::path& path, std::size_t line) {
  try {
    return parse_double(cell, "value");
  } catch (const ConfigError&) {
    throw DataError(path.string() + ":" + std::to_string(line) + ": cannot parse '" + cell + "'");
  }
}

fs::path with_ext(const fs::path& stem, const char* ext) {
  fs::path p = stem;
  p += ext;
  return p;
}

}  // namespace

void write_series_csv(const fs::path& path, const stats::SampledSeries& price, const stats::SampledSeries& trades) {
  if (price.size() != trades.size()) throw DataError("price and trades series differ in length");
  std::ostringstream os;
  os << "t_s,price,trades\n";
  for (std::size_t i = 0; i < price.size(); ++i) {
    os << format_double(price.time_at(i)) << ',' << format_double(price.values[i]) << ','
       << format_double(trades.values[i]) << '\n';
  }
  auto out = open_out(path);
  out << os.str();
}

ingest::MinuteSeries read_series_csv(const fs::path& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line) || strip_cr(line) != "t_s,price,trades")
    throw DataError(path.string() + ": expected header t_s,price,trades");
  std::vector<double> t, p, n;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != 3) throw DataError(path.string() + ":" + std::to_string(line_no) + ": expected 3 columns");
    t.push_back(number(cells[0], path, line_no));
    p.push_back(number(cells[1], path, line_no));
    n.push_back(number(cells[2], path, line_no));
  }
  if (t.empty()) throw DataError(path.string() + ": no rows");
  const double dt = t.size() > 1 ? t[1] - t[0] : 60.0;
  if (!(dt > 0)) throw DataError(path.string() + ": time column must increase");
  ingest::MinuteSeries out;
  out.price = {dt, t[0] - dt, std::move(p), stats::SeriesKind::Price};
  out.trades = {dt, t[0] - dt, std::move(n), stats::SeriesKind::Trades};
  return out;
}

void write_trade_log_csv(const fs::path& path, std::span<const model::TradeRecord> log) {
  std::ostringstream os;
  os << "t_s,price,side,initiator\n";
  for (const auto& tr : log) {
    os << format_double(tr.t) << ',' << format_double(tr.price) << ',' << (tr.side == model::Side::Buy ? "buy" : "sell")
       << ',' << (tr.initiator == model::Initiator::Chartist ? "chartist" : "fundamentalist") << '\n';
  }
  auto out = open_out(path);
  out << os.str();
}

void write_values_csv(const fs::path& path, const stats::SampledSeries& series) {
  std::ostringstream os;
  os << "t_s,value\n";
  for (std::size_t i = 0; i < series.size(); ++i)
    os << format_double(series.time_at(i)) << ',' << format_double(series.values[i]) << '\n';
  auto out = open_out(path);
  out << os.str();
}

void write_curve(const fs::path& stem, const stats::StatCurve& curve,
                 const std::optional<std::pair<double, double>>& interval) {
  std::ostringstream os;
  os << "grid,value\n";
  for (std::size_t i = 0; i < curve.size(); ++i)
    os << format_double(curve.grid[i]) << ',' << format_double(curve.values[i]) << '\n';
  {
    auto out = open_out(with_ext(stem, ".csv"));
    out << os.str();
  }
  const auto& m = curve.meta;
  json j = {
      {"kind", std::string(stats::to_string(curve.kind))},
      {"points", curve.size()},
      {"normalization", m.normalization},
      {"normalization_value", m.normalization_value},
      {"zero_fraction", m.zero_fraction},
      {"out_of_range_fraction", m.out_of_range_fraction},
      {"bins_per_decade", m.bins_per_decade},
      {"segment_length", m.segment_length},
      {"overlap", m.overlap},
      {"sample_interval", m.sample_interval},
      {"samples", m.samples},
  };
  if (interval) j["interval"] = {interval->first, interval->second};
  auto out = open_out(with_ext(stem, ".json"));
  out << j.dump(2) << '\n';
}

stats::StatCurve read_curve(const fs::path& stem, std::optional<std::pair<double, double>>* interval) {
  const auto json_path = with_ext(stem, ".json");
  const auto csv_path = with_ext(stem, ".csv");
  stats::StatCurve curve;
  try {
    auto in = open_in(json_path);
    const json j = json::parse(in);
    curve.kind = stats::curve_kind_from_string(j.at("kind").get<std::string>());
    auto& m = curve.meta;
    m.normalization = j.value("normalization", std::string("none"));
    m.normalization_value = j.value("normalization_value", 1.0);
    m.zero_fraction = j.value("zero_fraction", 0.0);
    m.out_of_range_fraction = j.value("out_of_range_fraction", 0.0);
    m.bins_per_decade = j.value("bins_per_decade", 0);
    m.segment_length = j.value("segment_length", std::size_t{0});
    m.overlap = j.value("overlap", 0.0);
    m.sample_interval = j.value("sample_interval", 0.0);
    m.samples = j.value("samples", std::size_t{0});
    if (interval) {
      if (j.contains("interval")) *interval = std::pair{j["interval"].at(0).get<double>(), j["interval"].at(1).get<double>()};
      else interval->reset();
    }
  } catch (const json::exception& e) {
    throw DataError(json_path.string() + ": " + e.what());
  }

  auto in = open_in(csv_path);
  std::string line;
  if (!std::getline(in, line) || strip_cr(line) != "grid,value")
    throw DataError(csv_path.string() + ": expected header grid,value");
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != 2) throw DataError(csv_path.string() + ":" + std::to_string(line_no) + ": expected 2 columns");
    curve.grid.push_back(number(cells[0], csv_path, line_no));
    curve.values.push_back(number(cells[1], csv_path, line_no));
  }
  return curve;
}

std::vector<fs::path> write_target(const fs::path& dir, const calibrate::CalibrationTarget& target) {
  std::vector<fs::path> files;
  for (std::size_t i = 0; i < calibrate::kCurveCount; ++i) {
    const fs::path stem = dir / calibrate::kCurveNames[i];
    write_curve(stem, target.curves[i].curve, target.curves[i].interval);
    files.push_back(fs::path(calibrate::kCurveNames[i]) += ".csv");
    files.push_back(fs::path(calibrate::kCurveNames[i]) += ".json");
  }
  return files;
}

calibrate::CalibrationTarget read_target(const fs::path& dir) {
  calibrate::CalibrationTarget target;
  for (std::size_t i = 0; i < calibrate::kCurveCount; ++i) {
    auto& tc = target.curves[i];
    tc.curve = read_curve(dir / calibrate::kCurveNames[i], &tc.interval);
  }
  target.validate();
  return target;
}

std::string file_checksum(const fs::path& path) {
  auto in = open_in(path);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof buf);
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ULL;
    }
  }
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(h));
  return hex;
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_text_atomic(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw DataError("cannot write '" + tmp.string() + "'");
    out << text;
    out.flush();
    if (!out) throw DataError("failed writing '" + tmp.string() + "'");
  }
  fs::rename(tmp, path);
}

void write_manifest(const fs::path& dir, const RunManifest& manifest) {
  json outputs = json::array();
  for (const auto& rel : manifest.outputs) {
    outputs.push_back({{"path", rel.generic_string()}, {"fnv1a64", file_checksum(dir / rel)}});
  }
  json j = {
      {"command", manifest.command},
      {"version", manifest.version},
      {"seed", manifest.seed},
      {"started", manifest.started},
      {"finished", manifest.finished},
      {"config", manifest.config},
      {"outputs", outputs},
  };
  write_text_atomic(dir / "manifest.json", j.dump(2) + "\n");
}

}  // namespace herdbook::io
