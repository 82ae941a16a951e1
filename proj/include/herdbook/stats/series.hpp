#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

namespace herdbook::stats {

enum class SeriesKind {
  Price,
  Trades,
  AbsReturn,
  ModulatingReturn,  // y = N_c / (N - N_c)
  Fraction,          // x = N_c / N
  Generic,
};

std::string_view to_string(SeriesKind kind);
SeriesKind series_kind_from_string(std::string_view name);  // throws DataError

/// Uniformly sampled series. values[i] belongs to the window ending at
/// t0 + (i + 1) * sample_interval; t0 is the start of the first window.
struct SampledSeries {
  double sample_interval = 1.0;  // seconds
  double t0 = 0.0;               // seconds
  std::vector<double> values;
  SeriesKind kind = SeriesKind::Generic;

  std::size_t size() const { return values.size(); }
  bool empty() const { return values.empty(); }
  double time_at(std::size_t i) const { return t0 + static_cast<double>(i + 1) * sample_interval; }
};

}  // namespace herdbook::stats
