#include "herdbook/stats/pipeline.hpp"

#include <algorithm>

#include "herdbook/core/error.hpp"
#include "herdbook/stats/estimators.hpp"
#include "herdbook/stats/transforms.hpp"

namespace herdbook::stats {

StatCurve binned_psd(const SampledSeries& series, const CurveSettings& settings) {
  const std::size_t segment = std::min(settings.psd_segment_length, series.size());
  return log_bin_curve(psd(series, segment, settings.psd_overlap), settings.psd_bins_per_decade);
}

CurveSet compute_curve_set(const SampledSeries& price, const SampledSeries& trades,
                           const CurveSettings& settings) {
  if (!(settings.return_scale_divisor > 0)) throw ConfigError("return_scale_divisor must be positive");

  const SampledSeries raw_returns = abs_log_returns(price, settings.return_lag);
  SampledSeries returns = normalize(raw_returns, NormalizeMode::ByStd);
  const double return_std = population_std(raw_returns.values);
  for (double& v : returns.values) v /= settings.return_scale_divisor;

  const SampledSeries activity = normalize(trades, NormalizeMode::ByMean);
  const double activity_mean = mean(trades.values);

  CurveSet set;
  set.return_pdf = pdf_log_bins(returns, settings.pdf_bins_per_decade);
  set.return_psd = binned_psd(returns, settings);
  set.activity_pdf = pdf_log_bins(activity, settings.pdf_bins_per_decade);
  set.activity_psd = binned_psd(activity, settings);
  for (StatCurve* c : {&set.return_pdf, &set.return_psd}) {
    c->meta.normalization = "std";
    c->meta.normalization_value = return_std * settings.return_scale_divisor;
  }
  for (StatCurve* c : {&set.activity_pdf, &set.activity_psd}) {
    c->meta.normalization = "mean";
    c->meta.normalization_value = activity_mean;
  }
  return set;
}

}  // namespace herdbook::stats
