#include "herdbook/stats/compare.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "herdbook/core/error.hpp"

namespace herdbook::stats {

SlopeFit loglog_slope(const StatCurve& curve, double lo, double hi) {
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const double x = curve.grid[i];
    const double v = curve.values[i];
    if (x < lo || x > hi || !(v > 0) || !(x > 0)) continue;
    xs.push_back(std::log10(x));
    ys.push_back(std::log10(v));
  }
  if (xs.size() < 5)
    throw DataError("slope fit needs at least 5 positive points in range, found " + std::to_string(xs.size()));

  const auto n = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (!(sxx > 0)) throw DataError("slope fit needs distinct grid points");
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double sse = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (intercept + slope * xs[i]);
    sse += r * r;
  }
  const double stderr_slope = std::sqrt(sse / (n - 2) / sxx);
  return {slope, intercept, stderr_slope, xs.size()};
}

std::optional<double> interpolate_loglog(const StatCurve& curve, double x) {
  if (curve.empty() || !(x > 0)) return std::nullopt;
  if (x < curve.grid.front() || x > curve.grid.back()) return std::nullopt;
  const auto it = std::lower_bound(curve.grid.begin(), curve.grid.end(), x);
  const auto j = static_cast<std::size_t>(it - curve.grid.begin());
  if (curve.grid[j] == x) {
    return curve.values[j] > 0 ? std::optional<double>(curve.values[j]) : std::nullopt;
  }
  const std::size_t i = j - 1;
  const double v0 = curve.values[i];
  const double v1 = curve.values[j];
  if (!(v0 > 0) || !(v1 > 0)) return std::nullopt;
  const double w = std::log(x / curve.grid[i]) / std::log(curve.grid[j] / curve.grid[i]);
  return std::exp((1 - w) * std::log(v0) + w * std::log(v1));
}

std::optional<double> curve_rmse(const StatCurve& model, const StatCurve& target,
                                 std::optional<std::pair<double, double>> range) {
  double ss = 0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < target.size(); ++i) {
    const double x = target.grid[i];
    if (range && (x < range->first || x > range->second)) continue;
    if (!(target.values[i] > 0)) continue;
    const auto m = interpolate_loglog(model, x);
    if (!m) continue;
    const double d = std::log10(*m) - std::log10(target.values[i]);
    ss += d * d;
    ++n;
  }
  if (n == 0) return std::nullopt;
  return std::sqrt(ss / static_cast<double>(n));
}

StatCurve average_curves(std::span<const StatCurve> curves, int bins_per_decade) {
  if (curves.empty()) throw DataError("cannot average an empty list of curves");
  if (bins_per_decade < 1) throw DataError("bins_per_decade must be positive");
  const CurveKind kind = curves.front().kind;
  bool shared_grid = true;
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (const auto& c : curves) {
    if (c.kind != kind) throw DataError("cannot average curves of different kinds");
    if (c.empty()) continue;
    lo = std::min(lo, c.grid.front());
    hi = std::max(hi, c.grid.back());
    if (c.grid != curves.front().grid) shared_grid = false;
  }
  if (!(hi > 0)) throw DataError("all curves are empty");

  std::vector<double> grid;
  if (shared_grid) {
    grid = curves.front().grid;
  } else {
    const double decades = std::log10(hi / lo);
    const auto points = static_cast<std::size_t>(std::floor(decades * bins_per_decade + 1e-9)) + 1;
    for (std::size_t i = 0; i < points; ++i)
      grid.push_back(lo * std::pow(10.0, static_cast<double>(i) / bins_per_decade));
    if (grid.back() < hi * (1 - 1e-12)) grid.push_back(hi);
  }

  StatCurve out;
  out.kind = kind;
  out.meta = curves.front().meta;
  const std::size_t needed = curves.size() / 2 + 1;
  for (double x : grid) {
    double sum = 0;
    std::size_t covered = 0;
    for (const auto& c : curves) {
      if (auto v = interpolate_loglog(c, x)) {
        sum += *v;
        ++covered;
      }
    }
    if (covered < needed) continue;
    out.grid.push_back(x);
    out.values.push_back(sum / static_cast<double>(covered));
  }
  if (out.empty()) throw DataError("curves have no common support");
  return out;
}

}  // namespace herdbook::stats
