#pragma once

#include <cstddef>

#include "herdbook/stats/curve.hpp"
#include "herdbook/stats/series.hpp"

namespace herdbook::stats {

/// How a (price, trades) pair becomes the four comparison curves.
struct CurveSettings {
  int return_lag = 1;
  int pdf_bins_per_decade = 10;
  std::size_t psd_segment_length = 4096;  // clamped to the series length
  double psd_overlap = 0.5;
  int psd_bins_per_decade = 20;
  // Normalized absolute returns are divided by this before binning.
  double return_scale_divisor = 1.0;
};

struct CurveSet {
  StatCurve return_pdf;
  StatCurve return_psd;
  StatCurve activity_pdf;
  StatCurve activity_psd;
};

/// Absolute returns normalized by their standard deviation, trades per window
/// normalized by their mean, then log-binned PDF and log-binned PSD of each.
/// Propagates DegenerateSeriesError for constant prices or zero activity.
CurveSet compute_curve_set(const SampledSeries& price, const SampledSeries& trades,
                           const CurveSettings& settings = {});

/// Welch PSD averaged into log-spaced frequency bins.
StatCurve binned_psd(const SampledSeries& series, const CurveSettings& settings = {});

}  // namespace herdbook::stats
