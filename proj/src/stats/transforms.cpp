#include "herdbook/stats/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "herdbook/core/error.hpp"
#include "herdbook/stats/curve.hpp"

namespace herdbook::stats {

std::string_view to_string(SeriesKind kind) {
  switch (kind) {
    case SeriesKind::Price: return "price";
    case SeriesKind::Trades: return "trades";
    case SeriesKind::AbsReturn: return "abs_return";
    case SeriesKind::ModulatingReturn: return "modulating_return";
    case SeriesKind::Fraction: return "fraction";
    case SeriesKind::Generic: return "generic";
  }
  return "generic";
}

SeriesKind series_kind_from_string(std::string_view name) {
  for (auto kind : {SeriesKind::Price, SeriesKind::Trades, SeriesKind::AbsReturn,
                    SeriesKind::ModulatingReturn, SeriesKind::Fraction, SeriesKind::Generic}) {
    if (to_string(kind) == name) return kind;
  }
  throw DataError("unknown series kind '" + std::string(name) + "'");
}

std::string_view to_string(CurveKind kind) { return kind == CurveKind::Pdf ? "pdf" : "psd"; }

CurveKind curve_kind_from_string(std::string_view name) {
  if (name == "pdf") return CurveKind::Pdf;
  if (name == "psd") return CurveKind::Psd;
  throw DataError("unknown curve kind '" + std::string(name) + "'");
}

SampledSeries abs_log_returns(const SampledSeries& prices, int lag) {
  if (prices.kind != SeriesKind::Price) throw DataError("abs_log_returns needs a price series");
  if (lag < 1) throw DataError("return lag must be at least 1");
  const auto l = static_cast<std::size_t>(lag);
  SampledSeries out{prices.sample_interval, prices.t0 + static_cast<double>(lag) * prices.sample_interval,
                    {}, SeriesKind::AbsReturn};
  if (prices.size() <= l) return out;
  out.values.reserve(prices.size() - l);
  for (std::size_t i = l; i < prices.size(); ++i) {
    const double now = prices.values[i];
    const double before = prices.values[i - l];
    if (!(now > 0) || !(before > 0)) throw DataError("non-positive price at sample " + std::to_string(i));
    out.values.push_back(std::abs(std::log(now / before)));
  }
  return out;
}

double mean(std::span<const double> values) {
  if (values.empty()) return 0.0;
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

double population_std(std::span<const double> values) {
  if (values.empty()) return 0.0;
  const double m = mean(values);
  double ss = 0.0;
  for (double v : values) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(values.size()));
}

SampledSeries normalize(const SampledSeries& series, NormalizeMode mode) {
  const double scale = mode == NormalizeMode::ByStd ? population_std(series.values) : mean(series.values);
  if (series.empty() || !(scale != 0.0) || !std::isfinite(scale)) {
    throw DegenerateSeriesError(mode == NormalizeMode::ByStd ? "series has zero standard deviation"
                                                             : "series has zero mean");
  }
  SampledSeries out = series;
  for (double& v : out.values) v /= scale;
  return out;
}

double pearson_correlation(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DataError("correlation needs equal lengths");
  if (a.size() < 2) throw DataError("correlation needs at least two samples");
  const double ma = mean(a);
  const double mb = mean(b);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma;
    const double db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (!(saa > 0) || !(sbb > 0)) throw DegenerateSeriesError("correlation input has zero variance");
  const double r = sab / std::sqrt(saa * sbb);
  return std::max(-1.0, std::min(1.0, r));
}

double pearson_correlation(const SampledSeries& a, const SampledSeries& b) {
  return pearson_correlation(std::span<const double>(a.values), std::span<const double>(b.values));
}

}  // namespace herdbook::stats
