#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "herdbook/core/error.hpp"
#include "herdbook/core/rng.hpp"
#include "herdbook/stats/compare.hpp"
#include "herdbook/stats/estimators.hpp"
#include "herdbook/stats/ks.hpp"
#include "herdbook/stats/pipeline.hpp"
#include "herdbook/stats/transforms.hpp"

using namespace herdbook;
using namespace herdbook::stats;

namespace {

SampledSeries series(std::vector<double> v, SeriesKind kind = SeriesKind::Generic, double dt = 60.0) {
  SampledSeries s;
  s.sample_interval = dt;
  s.values = std::move(v);
  s.kind = kind;
  return s;
}

StatCurve power_law(double exponent, double lo, double hi, int n, double scale = 1.0) {
  StatCurve c;
  for (int i = 0; i < n; ++i) {
    const double x = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
    c.grid.push_back(x);
    c.values.push_back(scale * std::pow(x, exponent));
  }
  return c;
}

double integrate(const StatCurve& c, int bins_per_decade) {
  // Bin widths follow from log-spaced edges around each center.
  const double half = std::pow(10.0, 0.5 / bins_per_decade);
  double sum = 0;
  for (std::size_t i = 0; i < c.size(); ++i) sum += c.values[i] * c.grid[i] * (half - 1 / half);
  return sum;
}

}  // namespace

TEST(AbsLogReturns, Examples) {
  const auto flat = abs_log_returns(series({5, 5, 5, 5}, SeriesKind::Price));
  EXPECT_EQ(flat.values, (std::vector<double>{0, 0, 0}));
  const auto one = abs_log_returns(series({30000, 30040}, SeriesKind::Price));
  ASSERT_EQ(one.size(), 1u);
  EXPECT_NEAR(one.values[0], 1.333e-3, 1e-6);
  const auto dh = abs_log_returns(series({1, 2, 1}, SeriesKind::Price));
  EXPECT_NEAR(dh.values[0], std::numbers::ln2, 1e-15);
  EXPECT_NEAR(dh.values[1], std::numbers::ln2, 1e-15);
  EXPECT_EQ(dh.kind, SeriesKind::AbsReturn);
}

TEST(AbsLogReturns, LagAndErrors) {
  const auto r = abs_log_returns(series({1, 2, 4, 8}, SeriesKind::Price, 60), 2);
  ASSERT_EQ(r.size(), 2u);
  EXPECT_NEAR(r.values[0], std::log(4.0), 1e-14);
  EXPECT_DOUBLE_EQ(r.t0, 120);
  EXPECT_THROW(abs_log_returns(series({1, 2}, SeriesKind::Trades)), DataError);
  EXPECT_THROW(abs_log_returns(series({1, 0, 2}, SeriesKind::Price)), DataError);
  EXPECT_THROW(abs_log_returns(series({1, 2}, SeriesKind::Price), 0), DataError);
}

TEST(Normalize, Examples) {
  EXPECT_EQ(normalize(series({3, 3, 3}), NormalizeMode::ByMean).values, (std::vector<double>{1, 1, 1}));
  EXPECT_EQ(normalize(series({0, 2}), NormalizeMode::ByStd).values, (std::vector<double>{0, 2}));
  EXPECT_THROW(normalize(series({0, 0, 0}), NormalizeMode::ByStd), DegenerateSeriesError);
  EXPECT_THROW(normalize(series({0, 0, 0}), NormalizeMode::ByMean), DegenerateSeriesError);
  EXPECT_THROW(normalize(series({}), NormalizeMode::ByStd), DegenerateSeriesError);
}

TEST(PdfLogBins, UniformDensity) {
  Rng rng(1);
  std::vector<double> v(400000);
  for (auto& x : v) x = 1 + 9 * rng.uniform();
  const auto c = pdf_log_bins(series(v), 10, std::pair{1.0, 10.0});
  ASSERT_EQ(c.size(), 10u);
  for (double d : c.values) EXPECT_NEAR(d, 1.0 / 9, 0.004);
  EXPECT_NEAR(integrate(c, 10), 1.0, 1e-9);
}

TEST(PdfLogBins, ParetoTail) {
  Rng rng(2);
  std::vector<double> v(1000000);
  // Density ~ x^-4 for x >= 1: survival x^-3.
  for (auto& x : v) x = std::pow(rng.uniform_pos(), -1.0 / 3.0);
  const auto c = pdf_log_bins(series(v), 10);
  const auto fit = loglog_slope(c, 1.0, 30.0);
  EXPECT_NEAR(fit.slope, -4.0, 0.2);
}

TEST(PdfLogBins, SingleValue) {
  const auto c = pdf_log_bins(series({2.5, 2.5, 2.5, 2.5}), 10);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_NEAR(c.grid[0], 2.5, 0.3);
  EXPECT_GT(c.values[0], 0);
}

TEST(PdfLogBins, ZerosAndRangeAreReported) {
  const auto c = pdf_log_bins(series({0, 0, 1, 2, 3, 50}), 10, std::pair{1.0, 10.0});
  EXPECT_NEAR(c.meta.zero_fraction, 2.0 / 6, 1e-12);
  EXPECT_NEAR(c.meta.out_of_range_fraction, 1.0 / 6, 1e-12);
  EXPECT_NEAR(integrate(c, 10), 3.0 / 6, 1e-9);
  EXPECT_THROW(pdf_log_bins(series({0, 0}), 10), DegenerateSeriesError);
  EXPECT_THROW(pdf_log_bins(series({1, -1}), 10), DataError);
}

TEST(PdfLogBins, MassIsConserved) {
  Rng rng(3);
  std::vector<double> v(50000);
  for (auto& x : v) x = std::exp(rng.normal() * 2);
  EXPECT_NEAR(integrate(pdf_log_bins(series(v), 10, std::pair{1e-6, 1e6}), 10), 1.0, 1e-9);
}

TEST(Psd, WhiteNoiseParseval) {
  Rng rng(4);
  const double dt = 60;
  std::vector<double> v(1 << 18);
  for (auto& x : v) x = rng.normal();
  const auto c = psd(series(v, SeriesKind::Generic, dt), 4096, 0.5);
  ASSERT_EQ(c.size(), 2048u);
  const double df = 1.0 / (4096 * dt);
  EXPECT_NEAR(c.grid.front(), df, 1e-15);
  EXPECT_NEAR(c.grid.back(), 0.5 / dt, 1e-12);
  double power = 0;
  for (double p : c.values) power += p * df;
  EXPECT_NEAR(power, 1.0, 0.05);
  // Flat: low and high halves carry the same power.
  EXPECT_NEAR(loglog_slope(log_bin_curve(c), c.grid[10], c.grid.back()).slope, 0.0, 0.05);
}

TEST(Psd, SinusoidPeak) {
  const double dt = 1;
  const std::size_t seg = 1024;
  const double f0 = 100.0 / seg;
  std::vector<double> v(seg * 16);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::sin(2 * std::numbers::pi * f0 * i * dt);
  const auto c = psd(series(v, SeriesKind::Generic, dt), seg, 0.5);
  const auto peak = std::max_element(c.values.begin(), c.values.end()) - c.values.begin();
  EXPECT_NEAR(c.grid[peak], f0, 1e-12);
}

TEST(Psd, Errors) {
  EXPECT_THROW(psd(series(std::vector<double>(100, 1.0)), 128), DataError);
  EXPECT_THROW(psd(series(std::vector<double>(100, 1.0)), 8), DataError);
  EXPECT_THROW(psd(series(std::vector<double>(100, 1.0)), 32, 1.0), DataError);
}

TEST(LoglogSlope, ExactPowerLaw) {
  const auto fit = loglog_slope(power_law(-4, 1, 100, 30, 3.0), 1, 100);
  EXPECT_NEAR(fit.slope, -4.0, 1e-9);
  EXPECT_NEAR(fit.intercept, std::log10(3.0), 1e-9);
  EXPECT_EQ(fit.points, 30u);
  EXPECT_THROW(loglog_slope(power_law(-4, 1, 100, 30), 1, 1.2), DataError);
}

TEST(LoglogSlope, NoisyPowerLaw) {
  Rng rng(5);
  auto c = power_law(-2.5, 1, 1e4, 80);
  for (auto& v : c.values) v *= 1 + 0.1 * (2 * rng.uniform() - 1);
  EXPECT_NEAR(loglog_slope(c, 1, 1e4).slope, -2.5, 0.1);
}

TEST(Pearson, Examples) {
  Rng rng(6);
  std::vector<double> a(10000), b(10000), neg(10000);
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] = rng.normal();
    b[i] = rng.normal();
    neg[i] = -a[i];
  }
  EXPECT_NEAR(pearson_correlation(a, a), 1.0, 1e-12);
  EXPECT_NEAR(pearson_correlation(a, neg), -1.0, 1e-12);
  EXPECT_LT(std::abs(pearson_correlation(a, b)), 0.05);
  std::vector<double> flat(10000, 1.0);
  EXPECT_THROW(pearson_correlation(a, flat), DegenerateSeriesError);
  EXPECT_THROW(pearson_correlation(std::vector<double>{1, 2}, std::vector<double>{1, 2, 3}), DataError);
}

TEST(InterpolateAndRmse, FactorTen) {
  const auto a = power_law(-2, 1, 100, 20);
  const auto b = power_law(-2, 1, 100, 20, 10.0);
  EXPECT_NEAR(*curve_rmse(a, b), 1.0, 1e-12);
  EXPECT_NEAR(*interpolate_loglog(a, 3.0), 1.0 / 9, 1e-12);
  EXPECT_FALSE(interpolate_loglog(a, 0.5));
  EXPECT_NEAR(*curve_rmse(a, b, std::pair{10.0, 50.0}), 1.0, 1e-12);
  EXPECT_FALSE(curve_rmse(a, power_law(-2, 200, 300, 5)));
}

TEST(AverageCurves, Identical) {
  const auto a = power_law(-3, 1, 100, 21);
  const std::vector<StatCurve> two = {a, a};
  const auto m = average_curves(two);
  EXPECT_EQ(m.grid, a.grid);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(m.values[i], a.values[i], 1e-15);
}

TEST(AverageCurves, BracketsSlopes) {
  const std::vector<StatCurve> two = {power_law(-3, 1, 100, 41), power_law(-5, 1, 100, 41)};
  const auto m = average_curves(two);
  for (std::size_t i = 1; i < m.size(); ++i) {
    const double s = std::log(m.values[i] / m.values[i - 1]) / std::log(m.grid[i] / m.grid[i - 1]);
    EXPECT_LE(s, -3.0 + 1e-9);
    EXPECT_GE(s, -5.0 - 1e-9);
  }
}

TEST(AverageCurves, DifferentGridsAndErrors) {
  const std::vector<StatCurve> shifted = {power_law(-2, 1, 100, 17), power_law(-2, 1.1, 120, 23)};
  const auto m = average_curves(shifted);
  EXPECT_NEAR(loglog_slope(m, 2, 90).slope, -2, 1e-6);
  const std::vector<StatCurve> disjoint = {power_law(-2, 1, 10, 10), power_law(-2, 100, 1000, 10)};
  EXPECT_THROW(average_curves(disjoint), DataError);
  EXPECT_THROW(average_curves(std::vector<StatCurve>{}), DataError);
}

TEST(Ks, UniformSamples) {
  Rng rng(7);
  std::vector<double> v(100000);
  for (auto& x : v) x = rng.uniform();
  EXPECT_LT(ks_distance(v, [](double x) { return std::clamp(x, 0.0, 1.0); }), 0.01);
  EXPECT_NEAR(ks_distance(std::vector<double>{0.5}, [](double x) { return std::clamp(x, 0.0, 1.0); }), 0.5, 1e-12);
  std::vector<double> shifted(v);
  for (auto& x : shifted) x += 0.2;
  EXPECT_NEAR(ks_two_sample(v, shifted), 0.2, 0.01);
}

TEST(Pipeline, CurveSetShapes) {
  Rng rng(8);
  std::vector<double> p(20000), n(20000);
  double x = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    x += 1e-3 * rng.normal();
    p[i] = 30000 * std::exp(x);
    n[i] = static_cast<double>(rng.below(5));
  }
  const auto set = compute_curve_set(series(p, SeriesKind::Price), series(n, SeriesKind::Trades));
  EXPECT_EQ(set.return_pdf.kind, CurveKind::Pdf);
  EXPECT_EQ(set.return_psd.kind, CurveKind::Psd);
  EXPECT_EQ(set.return_pdf.meta.normalization, "std");
  EXPECT_EQ(set.activity_pdf.meta.normalization, "mean");
  EXPECT_FALSE(set.activity_psd.empty());
  EXPECT_THROW(compute_curve_set(series(std::vector<double>(100, 5.0), SeriesKind::Price),
                                 series(n, SeriesKind::Trades)),
               DegenerateSeriesError);
}
