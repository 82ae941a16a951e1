#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "herdbook/stats/series.hpp"

namespace herdbook::sde {

/// Kirman herding model. The SDE uses eps1, eps2 and h; the agent-level
/// simulation uses sigma_i = eps_i * h unless the sigmas are given explicitly,
/// in which case they must agree with eps_i * h.
struct KirmanSdeParams {
  double eps1 = 1.0;
  double eps2 = 1.0;
  double h = 1.0;
  std::optional<double> sigma1;
  std::optional<double> sigma2;
  int n_extensive = 0;  // > 0 selects the extensive variant with this N

  double sigma1_value() const { return sigma1.value_or(eps1 * h); }
  double sigma2_value() const { return sigma2.value_or(eps2 * h); }
  void validate() const;  // throws ConfigError
};

/// dx = h[eps1 (1 - x) - eps2 x] dt + sqrt(2 h x (1 - x) / M) dW, with M = 1
/// or M = n_extensive. Euler-Maruyama with reflection into [0, 1], one sample
/// every `sample_interval` (defaults to dt). Starts at the Beta mean.
stats::SampledSeries integrate_kirman_x(const KirmanSdeParams& params, double dt, double horizon,
                                        std::uint64_t seed,
                                        std::optional<double> sample_interval = std::nullopt);

struct YSdeParams {
  double eps_fc = 1.0;
  double eps_cf = 2.0;
  double alpha = 1.0;
  double h = 1.0;

  void validate() const;  // throws ConfigError
};

struct YClip {
  double y_min = 1e-4;
  double y_max = 1e4;
};

/// Step control for integrate_y. The path is integrated in z = ln y on the
/// intrinsic clock ds = y^(alpha - 1) (1 + y)^2 dt, where
///   dz = h [eps_fc - 1 + (1 - eps_cf) y] / (1 + y) ds + sqrt(2 h) dW_s
/// has bounded drift and constant noise. Each step advances the physical
/// clock by ds y^(1 - alpha) / (1 + y)^2.
struct YStepControl {
  double ds = 1e-3;  // intrinsic step, in units of 1/h
  std::optional<double> y0;  // defaults to 1 clipped into range
};

/// Path of dy = h[eps_fc + (2 - eps_cf) y](1 + y) y^alpha dt
///            + sqrt(2 h y^(1 + alpha)) (1 + y) dW,
/// reflected at the clip bounds and sampled every `dt` (sample-and-hold) up to
/// `horizon`. Throws InstabilityError naming the step if y stops being finite.
stats::SampledSeries integrate_y(const YSdeParams& params, double dt, double horizon, std::uint64_t seed,
                                 YClip clip = {}, YStepControl step = {});

/// Bass diffusion dx = (1 - x)(sigma1 + h x) dt by classical RK4. Sample i is
/// x at time (i + 1) dt.
stats::SampledSeries bass_trajectory(double sigma1, double h, double x0, double dt, double horizon);

/// P_f exp(r0 xi n_c / (n - n_c)); DomainError unless 0 < n_c < n.
double equilibrium_price_clearing(double r0, int n_c, int n, double xi, double p_f);

/// Tail exponent of the y PDF and slope of its PSD for a feedback power alpha:
/// (-eps_cf - alpha - 1, -1 - (eps_cf + alpha - 2) / (1 + alpha)).
/// DomainError for alpha <= -1.
std::pair<double, double> predicted_exponents(double eps_cf, double alpha);

/// Stationary density of x = N_c / N for the SDE: the Beta(eps1, eps2) CDF.
double beta_cdf(double x, double a, double b);

/// Agent-level Kirman model by the Gillespie method, X agents in state one:
///   non-extensive  X -> X + 1 at (N - X)(sigma1 + h X),  X -> X - 1 at X(sigma2 + h (N - X))
///   extensive      the herding terms use X / N and (N - X) / N instead.
/// Returns x = X / N at the end of every sample interval after `burn_in`.
stats::SampledSeries simulate_kirman_agents(const KirmanSdeParams& params, int n_agents, bool extensive,
                                            double horizon, double sample_interval, double burn_in,
                                            std::uint64_t seed);

}  // namespace herdbook::sde
