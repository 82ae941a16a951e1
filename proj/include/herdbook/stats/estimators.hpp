#pragma once

#include <cstddef>
#include <optional>
#include <utility>

#include "herdbook/stats/curve.hpp"
#include "herdbook/stats/series.hpp"

namespace herdbook::stats {

/// Log-binned probability density of a nonnegative series.
///
/// Zeros are excluded and their fraction is stored in meta.zero_fraction.
/// Bins are log-spaced over [min positive, max], or over `range` when given
/// (positive samples outside it go to meta.out_of_range_fraction). Densities
/// are counts / (all samples * bin width), so the curve integrates to the
/// retained mass. Empty bins are omitted. Throws DegenerateSeriesError for an
/// all-zero series and DataError for negative or non-finite input.
StatCurve pdf_log_bins(const SampledSeries& series, int bins_per_decade = 10,
                       std::optional<std::pair<double, double>> range = std::nullopt);

/// One-sided averaged periodogram (Welch, rectangular window).
///
/// Segments of segment_length samples start every
/// round(segment_length * (1 - overlap)) samples; each segment has its own
/// mean removed. Frequencies are k / (segment_length * dt) for
/// k = 1 .. segment_length / 2 (the zero frequency is dropped), and the
/// normalization makes sum(power * df) the (within-segment) variance.
/// Throws DataError if segment_length < 16, overlap is outside [0, 1) or the
/// series is shorter than one segment.
StatCurve psd(const SampledSeries& series, std::size_t segment_length, double overlap_fraction = 0.5);

/// Averages curve points into log-spaced grid bins starting at the first grid
/// point. Each output point sits at the geometric mean of its members.
StatCurve log_bin_curve(const StatCurve& curve, int bins_per_decade = 20);

}  // namespace herdbook::stats
