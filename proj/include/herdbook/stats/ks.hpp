#pragma once

#include <functional>
#include <span>

namespace herdbook::stats {

/// Kolmogorov-Smirnov distance between the empirical distribution of
/// `samples` and a continuous CDF.
double ks_distance(std::span<const double> samples, const std::function<double(double)>& cdf);

/// Two-sample Kolmogorov-Smirnov distance.
double ks_two_sample(std::span<const double> a, std::span<const double> b);

}  // namespace herdbook::stats
