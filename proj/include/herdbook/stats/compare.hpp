#pragma once

#include <optional>
#include <span>
#include <utility>

#include "herdbook/stats/curve.hpp"

namespace herdbook::stats {

struct SlopeFit {
  double slope;
  double intercept;  // log10 value at log10 grid = 0
  double stderr_slope;
  std::size_t points;
};

/// Least squares line through (log10 grid, log10 value) for the points with
/// grid in [lo, hi] and positive value. Throws DataError with fewer than five
/// such points.
SlopeFit loglog_slope(const StatCurve& curve, double lo, double hi);

/// Linear interpolation in log-log space; nullopt outside the grid span.
std::optional<double> interpolate_loglog(const StatCurve& curve, double x);

/// Root mean square of log10(model) - log10(target) over the target grid
/// points inside `range` (all points when absent) where the model can be
/// interpolated. nullopt when there is no common support.
std::optional<double> curve_rmse(const StatCurve& model, const StatCurve& target,
                                 std::optional<std::pair<double, double>> range = std::nullopt);

/// Pointwise mean of curves of one kind.
///
/// If every curve has the same grid that grid is kept; otherwise curves are
/// interpolated in log-log space onto a log grid (bins_per_decade) spanning
/// all inputs. A point is kept when a strict majority of the curves cover
/// it. Throws DataError for an empty list, mixed kinds, or no common support.
StatCurve average_curves(std::span<const StatCurve> curves, int bins_per_decade = 20);

}  // namespace herdbook::stats
