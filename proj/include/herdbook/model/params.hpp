#pragma once

#include <array>
#include <string_view>

namespace herdbook::model {

/// Parameters of the order book model with herd behavior.
///
/// Rates marked "relative" are multiplied by lambda_e / tau(N_c) to obtain
/// event rates in 1/s. Prices (gamma_theta, p_f) are in generic price units.
struct ModelParams {
  int n_agents = 500;          // N
  double lambda_e = 1e-7;      // reference event rate, 1/s
  double eps_cf = 1.0;         // idiosyncratic chartist -> fundamentalist
  double eps_fc = 1.0;         // idiosyncratic fundamentalist -> chartist
  double xi0 = 0.2;            // |mood|, in (0, 1]
  double lambda_m = 1e3;       // relative mood flip rate
  double lambda_0 = 0.1;       // minimum switching rate in the feedback term
  double alpha = 1.0;          // feedback exponent
  double gamma_k = 4.0;        // spread distribution shape
  double gamma_theta = 15.5;   // spread distribution scale, p.u.
  double p_f = 3e4;            // fundamental price, p.u.
  double lambda_tc = 3e4;      // relative chartist market order rate
  double lambda_tf = 3e4;      // relative fundamentalist market order rate

  // Throws ConfigError naming the first offending field.
  void validate() const;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

inline constexpr std::array<std::string_view, 13> kParamNames = {
    "n_agents", "lambda_e", "eps_cf",  "eps_fc",      "xi0", "lambda_m",  "lambda_0",
    "alpha",    "gamma_k",  "gamma_theta", "p_f", "lambda_tc", "lambda_tf"};

bool is_param_name(std::string_view name);

// Name-based access, used by config files, sweeps and the annealer.
// Both throw ConfigError for unknown names; set_param also rejects a
// non-integer n_agents.
double get_param(const ModelParams& params, std::string_view name);
void set_param(ModelParams& params, std::string_view name, double value);

// Parameter sets from the published figures.
ModelParams fig3_params();     // lambda_tc = lambda_tf = 3e4
ModelParams btc_fit_params();  // the Bitcoin fit
ModelParams nyse_fit_params(); // the NYSE fit (xi0 = 1, lambda_tc = 2, lambda_0 = 1.5)

}  // namespace herdbook::model
