#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace herdbook::stats {

enum class CurveKind { Pdf, Psd };

std::string_view to_string(CurveKind kind);
CurveKind curve_kind_from_string(std::string_view name);  // throws DataError

struct CurveMeta {
  std::string normalization = "none";  // "std", "mean" or "none"
  double normalization_value = 1.0;    // the divisor that was applied
  double zero_fraction = 0.0;          // pdf: samples equal to zero
  double out_of_range_fraction = 0.0;  // pdf: positive samples outside an explicit range
  int bins_per_decade = 0;
  std::size_t segment_length = 0;      // psd
  double overlap = 0.0;                // psd
  double sample_interval = 0.0;        // seconds, of the source series
  std::size_t samples = 0;             // length of the source series
};

/// Density or power on a strictly increasing positive grid (bin centers or
/// frequencies in Hz). Empty log bins are omitted, so values are positive.
struct StatCurve {
  CurveKind kind = CurveKind::Pdf;
  std::vector<double> grid;
  std::vector<double> values;
  CurveMeta meta;

  std::size_t size() const { return grid.size(); }
  bool empty() const { return grid.empty(); }
};

}  // namespace herdbook::stats
