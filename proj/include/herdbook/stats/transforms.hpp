#pragma once

#include <span>

#include "herdbook/stats/series.hpp"

namespace herdbook::stats {

enum class NormalizeMode { ByStd, ByMean };

/// |ln(p_i / p_{i-lag})|. The result starts lag samples later and is
/// shorter by lag. Throws DataError for a non-price series, lag < 1, or a
/// non-positive price.
SampledSeries abs_log_returns(const SampledSeries& prices, int lag = 1);

/// Divides by the population standard deviation or by the mean. Throws
/// DegenerateSeriesError when that statistic is zero (or the series is empty).
SampledSeries normalize(const SampledSeries& series, NormalizeMode mode);

double mean(std::span<const double> values);
double population_std(std::span<const double> values);

/// Product-moment correlation. Throws DataError on unequal or too short
/// inputs and DegenerateSeriesError when either side has zero variance.
double pearson_correlation(std::span<const double> a, std::span<const double> b);
double pearson_correlation(const SampledSeries& a, const SampledSeries& b);

}  // namespace herdbook::stats
