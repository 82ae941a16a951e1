#include "herdbook/sde/sde.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <tuple>

#include <boost/math/special_functions/beta.hpp>

#include "herdbook/core/error.hpp"
#include "herdbook/core/rng.hpp"

namespace herdbook::sde {

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

bool positive(double v) { return std::isfinite(v) && v > 0; }

std::size_t sample_count(double horizon, double interval) {
  return static_cast<std::size_t>(std::floor(horizon / interval * (1 + 1e-12)));
}

double reflect_unit(double x) {
  for (int i = 0; i < 4 && (x < 0 || x > 1); ++i) x = x < 0 ? -x : 2 - x;
  return std::clamp(x, 0.0, 1.0);
}

}  // namespace

void KirmanSdeParams::validate() const {
  require(positive(eps1), "eps1 must be positive");
  require(positive(eps2), "eps2 must be positive");
  require(positive(h), "h must be positive");
  require(n_extensive >= 0, "n_extensive must be nonnegative");
  for (const auto& [sigma, eps, name] : {std::tuple{sigma1, eps1, "sigma1"}, std::tuple{sigma2, eps2, "sigma2"}}) {
    if (!sigma) continue;
    require(std::isfinite(*sigma) && *sigma >= 0, std::string(name) + " must be nonnegative");
    require(std::abs(*sigma / h - eps) <= 1e-9 * std::max(1.0, eps),
            std::string(name) + " / h disagrees with the matching eps");
  }
}

void YSdeParams::validate() const {
  require(positive(eps_fc), "eps_fc must be positive");
  require(positive(eps_cf), "eps_cf must be positive");
  require(std::isfinite(alpha) && alpha >= 0, "alpha must be nonnegative");
  require(positive(h), "h must be positive");
}

stats::SampledSeries integrate_kirman_x(const KirmanSdeParams& params, double dt, double horizon,
                                        std::uint64_t seed, std::optional<double> sample_interval) {
  params.validate();
  require(positive(dt), "dt must be positive");
  require(positive(horizon), "horizon must be positive");
  const double interval = sample_interval.value_or(dt);
  require(positive(interval) && interval >= dt, "sample_interval must be at least dt");
  require(params.h * std::max(params.eps1, params.eps2) * dt < 0.1,
          "dt too large: drift * dt must stay below 0.1 at the boundaries");

  const auto steps_per_sample = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(interval / dt)));
  const double step = interval / static_cast<double>(steps_per_sample);
  const double noise_scale = params.n_extensive > 0 ? 1.0 / params.n_extensive : 1.0;

  stats::SampledSeries out;
  out.sample_interval = interval;
  out.kind = stats::SeriesKind::Fraction;
  const std::size_t n = sample_count(horizon, interval);
  out.values.reserve(n);

  Rng rng(seed);
  double x = params.eps1 / (params.eps1 + params.eps2);
  const double sq = std::sqrt(step);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < steps_per_sample; ++j) {
      const double drift = params.h * (params.eps1 * (1 - x) - params.eps2 * x);
      const double diffusion = std::sqrt(std::max(0.0, 2 * params.h * x * (1 - x) * noise_scale));
      x = reflect_unit(x + drift * step + diffusion * sq * rng.normal());
    }
    out.values.push_back(x);
  }
  return out;
}

stats::SampledSeries integrate_y(const YSdeParams& params, double dt, double horizon, std::uint64_t seed,
                                 YClip clip, YStepControl step) {
  params.validate();
  require(positive(dt), "dt must be positive");
  require(positive(horizon), "horizon must be positive");
  require(positive(clip.y_min) && positive(clip.y_max) && clip.y_min < clip.y_max,
          "y_clip must satisfy 0 < y_min < y_max");
  require(positive(step.ds), "intrinsic step ds must be positive");
  const double max_drift = params.h * std::max(std::abs(params.eps_fc - 1), std::abs(1 - params.eps_cf));
  require(max_drift * step.ds <= 0.1, "intrinsic step too large: drift * ds must not exceed 0.1");

  const double z_min = std::log(clip.y_min);
  const double z_max = std::log(clip.y_max);
  double z = std::log(std::clamp(step.y0.value_or(1.0), clip.y_min, clip.y_max));
  if (!std::isfinite(z)) throw ConfigError("y0 must be positive");

  stats::SampledSeries out;
  out.sample_interval = dt;
  out.kind = stats::SeriesKind::ModulatingReturn;
  const std::size_t n = sample_count(horizon, dt);
  out.values.reserve(n);

  Rng rng(seed);
  const double noise = std::sqrt(2 * params.h * step.ds);
  const double a = params.eps_fc - 1;
  const double b = 1 - params.eps_cf;
  double t = 0;
  double next_sample = dt;
  while (out.values.size() < n) {
    const double y = std::exp(z);
    const double dt_phys = step.ds * std::pow(y, 1 - params.alpha) / ((1 + y) * (1 + y));
    double z_new = z + params.h * (a + b * y) / (1 + y) * step.ds + noise * rng.normal();
    if (!std::isfinite(z_new) || !std::isfinite(dt_phys) || !(dt_phys > 0)) {
      throw InstabilityError("integrate_y: non-finite state at t = " + std::to_string(t) +
                             " with intrinsic step ds = " + std::to_string(step.ds));
    }
    if (z_new < z_min) z_new = 2 * z_min - z_new;
    if (z_new > z_max) z_new = 2 * z_max - z_new;
    z_new = std::clamp(z_new, z_min, z_max);

    t += dt_phys;
    while (t >= next_sample && out.values.size() < n) {
      out.values.push_back(y);
      next_sample = static_cast<double>(out.values.size() + 1) * dt;
    }
    z = z_new;
  }
  return out;
}

stats::SampledSeries bass_trajectory(double sigma1, double h, double x0, double dt, double horizon) {
  require(std::isfinite(sigma1) && sigma1 >= 0, "sigma1 must be nonnegative");
  require(std::isfinite(h) && h >= 0, "h must be nonnegative");
  require(std::isfinite(x0) && x0 >= 0 && x0 <= 1, "x0 must lie in [0, 1]");
  require(positive(dt), "dt must be positive");
  require(positive(horizon), "horizon must be positive");

  const auto f = [&](double x) { return (1 - x) * (sigma1 + h * x); };
  stats::SampledSeries out;
  out.sample_interval = dt;
  out.kind = stats::SeriesKind::Fraction;
  const std::size_t n = sample_count(horizon, dt);
  out.values.reserve(n);
  double x = x0;
  for (std::size_t i = 0; i < n; ++i) {
    const double k1 = f(x);
    const double k2 = f(x + 0.5 * dt * k1);
    const double k3 = f(x + 0.5 * dt * k2);
    const double k4 = f(x + dt * k3);
    x = std::min(1.0, x + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4));
    out.values.push_back(x);
  }
  return out;
}

double equilibrium_price_clearing(double r0, int n_c, int n, double xi, double p_f) {
  if (!(n_c > 0 && n_c < n)) {
    throw DomainError("clearing price needs 0 < n_c < n, got n_c = " + std::to_string(n_c) +
                      ", n = " + std::to_string(n));
  }
  const double y = static_cast<double>(n_c) / static_cast<double>(n - n_c);
  return p_f * std::exp(r0 * y * xi);
}

std::pair<double, double> predicted_exponents(double eps_cf, double alpha) {
  if (!(alpha > -1)) throw DomainError("predicted exponents need alpha > -1");
  return {-eps_cf - alpha - 1, -1 - (eps_cf + alpha - 2) / (1 + alpha)};
}

double beta_cdf(double x, double a, double b) {
  if (x <= 0) return 0;
  if (x >= 1) return 1;
  return boost::math::ibeta(a, b, x);
}

stats::SampledSeries simulate_kirman_agents(const KirmanSdeParams& params, int n_agents, bool extensive,
                                            double horizon, double sample_interval, double burn_in,
                                            std::uint64_t seed) {
  params.validate();
  require(n_agents > 0, "n_agents must be positive");
  require(positive(horizon), "horizon must be positive");
  require(positive(sample_interval), "sample_interval must be positive");
  require(std::isfinite(burn_in) && burn_in >= 0 && burn_in < horizon, "burn_in must lie in [0, horizon)");

  const double s1 = params.sigma1_value();
  const double s2 = params.sigma2_value();
  const double big_n = n_agents;
  const double herd = extensive ? params.h / big_n : params.h;

  stats::SampledSeries out;
  out.sample_interval = sample_interval;
  out.t0 = burn_in;
  out.kind = stats::SeriesKind::Fraction;
  const std::size_t n = sample_count(horizon - burn_in, sample_interval);
  out.values.reserve(n);

  Rng rng(seed);
  const double mean = params.eps1 / (params.eps1 + params.eps2);
  long x = std::lround(mean * big_n);
  double t = 0;
  double next_sample = burn_in + sample_interval;
  while (out.values.size() < n) {
    const double xd = static_cast<double>(x);
    const double up = (big_n - xd) * (s1 + herd * xd);
    const double down = xd * (s2 + herd * (big_n - xd));
    const double total = up + down;
    const double t_next = total > 0 ? t + rng.exponential(total) : std::numeric_limits<double>::infinity();
    while (next_sample <= t_next && out.values.size() < n) {
      out.values.push_back(xd / big_n);
      next_sample = burn_in + static_cast<double>(out.values.size() + 1) * sample_interval;
    }
    if (out.values.size() >= n) break;
    t = t_next;
    if (rng.uniform() * total < up) ++x;
    else --x;
  }
  return out;
}

}  // namespace herdbook::sde
