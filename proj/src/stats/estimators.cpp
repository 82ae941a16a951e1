#include "herdbook/stats/estimators.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <mutex>
#include <string>
#include <vector>

#include "herdbook/core/error.hpp"

namespace herdbook::stats {

StatCurve pdf_log_bins(const SampledSeries& series, int bins_per_decade,
                       std::optional<std::pair<double, double>> range) {
  if (bins_per_decade < 1) throw DataError("bins_per_decade must be positive");
  if (series.empty()) throw DegenerateSeriesError("empty series");

  std::size_t zeros = 0;
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (double v : series.values) {
    if (!std::isfinite(v) || v < 0) throw DataError("pdf input must be finite and nonnegative");
    if (v == 0.0) {
      ++zeros;
      continue;
    }
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (zeros == series.size()) throw DegenerateSeriesError("all samples are zero");

  if (range) {
    if (!(range->first > 0 && range->second > range->first)) throw DataError("invalid pdf range");
    lo = range->first;
    hi = range->second;
  } else if (lo == hi) {
    const double half = std::pow(10.0, 0.5 / bins_per_decade);
    lo /= half;
    hi *= half;
  }

  const double decades = std::log10(hi / lo);
  const auto bins = static_cast<std::size_t>(std::max(1.0, std::ceil(decades * bins_per_decade - 1e-9)));
  const double log_lo = std::log(lo);
  const double log_span = std::log(hi / lo);

  std::vector<std::size_t> counts(bins, 0);
  std::size_t outside = 0;
  for (double v : series.values) {
    if (v == 0.0) continue;
    if (v < lo || v > hi) {
      ++outside;
      continue;
    }
    auto b = static_cast<std::size_t>(std::floor(static_cast<double>(bins) * (std::log(v) - log_lo) / log_span));
    counts[std::min(b, bins - 1)] += 1;
  }

  const auto n = static_cast<double>(series.size());
  StatCurve curve;
  curve.kind = CurveKind::Pdf;
  curve.meta.zero_fraction = static_cast<double>(zeros) / n;
  curve.meta.out_of_range_fraction = static_cast<double>(outside) / n;
  curve.meta.bins_per_decade = bins_per_decade;
  curve.meta.sample_interval = series.sample_interval;
  curve.meta.samples = series.size();
  for (std::size_t b = 0; b < bins; ++b) {
    if (counts[b] == 0) continue;
    const double left = std::exp(log_lo + log_span * static_cast<double>(b) / static_cast<double>(bins));
    const double right = std::exp(log_lo + log_span * static_cast<double>(b + 1) / static_cast<double>(bins));
    curve.grid.push_back(std::sqrt(left * right));
    curve.values.push_back(static_cast<double>(counts[b]) / (n * (right - left)));
  }
  return curve;
}

namespace {

// FFTW's planner is not reentrant; execution with an existing plan is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

class RealFft {
 public:
  explicit RealFft(std::size_t n) {
    in_ = fftw_alloc_real(n);
    out_ = fftw_alloc_complex(n / 2 + 1);
    std::lock_guard lock(planner_mutex());
    plan_ = fftw_plan_dft_r2c_1d(static_cast<int>(n), in_, out_, FFTW_ESTIMATE);
  }
  ~RealFft() {
    {
      std::lock_guard lock(planner_mutex());
      fftw_destroy_plan(plan_);
    }
    fftw_free(in_);
    fftw_free(out_);
  }
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  double* input() { return in_; }
  void execute() { fftw_execute(plan_); }
  double power(std::size_t k) const { return out_[k][0] * out_[k][0] + out_[k][1] * out_[k][1]; }

 private:
  double* in_;
  fftw_complex* out_;
  fftw_plan plan_;
};

}  // namespace

StatCurve psd(const SampledSeries& series, std::size_t segment_length, double overlap_fraction) {
  if (segment_length < 16) throw DataError("psd segment length must be at least 16");
  if (!(overlap_fraction >= 0 && overlap_fraction < 1)) throw DataError("psd overlap must lie in [0, 1)");
  if (series.size() < segment_length)
    throw DataError("series of length " + std::to_string(series.size()) + " is shorter than one psd segment (" +
                    std::to_string(segment_length) + ")");
  for (double v : series.values)
    if (!std::isfinite(v)) throw DataError("psd input must be finite");

  const std::size_t step = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::lround(static_cast<double>(segment_length) * (1.0 - overlap_fraction))));
  const std::size_t segments = 1 + (series.size() - segment_length) / step;
  const std::size_t half = segment_length / 2;

  RealFft fft(segment_length);
  std::vector<double> acc(half + 1, 0.0);
  for (std::size_t s = 0; s < segments; ++s) {
    const double* seg = series.values.data() + s * step;
    double m = 0.0;
    for (std::size_t i = 0; i < segment_length; ++i) m += seg[i];
    m /= static_cast<double>(segment_length);
    double* in = fft.input();
    for (std::size_t i = 0; i < segment_length; ++i) in[i] = seg[i] - m;
    fft.execute();
    for (std::size_t k = 1; k <= half; ++k) acc[k] += fft.power(k);
  }

  const double dt = series.sample_interval;
  const auto len = static_cast<double>(segment_length);
  StatCurve curve;
  curve.kind = CurveKind::Psd;
  curve.meta.segment_length = segment_length;
  curve.meta.overlap = overlap_fraction;
  curve.meta.sample_interval = dt;
  curve.meta.samples = series.size();
  curve.grid.reserve(half);
  curve.values.reserve(half);
  for (std::size_t k = 1; k <= half; ++k) {
    const bool nyquist = (segment_length % 2 == 0) && k == half;
    const double factor = (nyquist ? 1.0 : 2.0) * dt / len;
    curve.grid.push_back(static_cast<double>(k) / (len * dt));
    curve.values.push_back(factor * acc[k] / static_cast<double>(segments));
  }
  return curve;
}

StatCurve log_bin_curve(const StatCurve& curve, int bins_per_decade) {
  if (bins_per_decade < 1) throw DataError("bins_per_decade must be positive");
  StatCurve out;
  out.kind = curve.kind;
  out.meta = curve.meta;
  out.meta.bins_per_decade = bins_per_decade;
  if (curve.empty()) return out;

  const double log_origin = std::log10(curve.grid.front());
  std::size_t i = 0;
  while (i < curve.size()) {
    const auto bin = static_cast<long>(std::floor((std::log10(curve.grid[i]) - log_origin) * bins_per_decade + 1e-9));
    double log_sum = 0.0, value_sum = 0.0;
    std::size_t members = 0;
    while (i < curve.size() &&
           static_cast<long>(std::floor((std::log10(curve.grid[i]) - log_origin) * bins_per_decade + 1e-9)) == bin) {
      log_sum += std::log(curve.grid[i]);
      value_sum += curve.values[i];
      ++members;
      ++i;
    }
    const double value = value_sum / static_cast<double>(members);
    if (value > 0) {
      out.grid.push_back(std::exp(log_sum / static_cast<double>(members)));
      out.values.push_back(value);
    }
  }
  return out;
}

}  // namespace herdbook::stats
