#include "herdbook/model/params.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "herdbook/core/error.hpp"

namespace herdbook::model {

namespace {

void require(bool ok, std::string_view field, std::string_view rule) {
  if (!ok) throw ConfigError(std::string(field) + " must be " + std::string(rule));
}

bool finite(double v) { return std::isfinite(v); }

}  // namespace

void ModelParams::validate() const {
  require(n_agents > 0, "n_agents", "a positive integer");
  require(finite(lambda_e) && lambda_e > 0, "lambda_e", "positive");
  require(finite(eps_cf) && eps_cf > 0, "eps_cf", "positive");
  require(finite(eps_fc) && eps_fc > 0, "eps_fc", "positive");
  require(finite(xi0) && xi0 > 0 && xi0 <= 1, "xi0", "in (0, 1]");
  require(finite(lambda_m) && lambda_m >= 0, "lambda_m", "nonnegative");
  require(finite(lambda_0) && lambda_0 >= 0, "lambda_0", "nonnegative");
  require(finite(alpha) && alpha >= 0, "alpha", "nonnegative");
  require(finite(gamma_k) && gamma_k > 0, "gamma_k", "positive");
  require(finite(gamma_theta) && gamma_theta > 0, "gamma_theta", "positive");
  require(finite(p_f) && p_f > 0, "p_f", "positive");
  require(finite(lambda_tc) && lambda_tc >= 0, "lambda_tc", "nonnegative");
  require(finite(lambda_tf) && lambda_tf >= 0, "lambda_tf", "nonnegative");
}

bool is_param_name(std::string_view name) {
  return std::find(kParamNames.begin(), kParamNames.end(), name) != kParamNames.end();
}

namespace {

double* field(ModelParams& p, std::string_view name) {
  if (name == "lambda_e") return &p.lambda_e;
  if (name == "eps_cf") return &p.eps_cf;
  if (name == "eps_fc") return &p.eps_fc;
  if (name == "xi0") return &p.xi0;
  if (name == "lambda_m") return &p.lambda_m;
  if (name == "lambda_0") return &p.lambda_0;
  if (name == "alpha") return &p.alpha;
  if (name == "gamma_k") return &p.gamma_k;
  if (name == "gamma_theta") return &p.gamma_theta;
  if (name == "p_f") return &p.p_f;
  if (name == "lambda_tc") return &p.lambda_tc;
  if (name == "lambda_tf") return &p.lambda_tf;
  return nullptr;
}

}  // namespace

double get_param(const ModelParams& params, std::string_view name) {
  if (name == "n_agents") return params.n_agents;
  auto copy = params;
  if (double* f = field(copy, name)) return *f;
  throw ConfigError("unknown model parameter '" + std::string(name) + "'");
}

void set_param(ModelParams& params, std::string_view name, double value) {
  if (name == "n_agents") {
    if (!std::isfinite(value) || value != std::floor(value) || value < 1 || value > 1e9)
      throw ConfigError("n_agents must be a positive integer");
    params.n_agents = static_cast<int>(value);
    return;
  }
  double* f = field(params, name);
  if (f == nullptr) throw ConfigError("unknown model parameter '" + std::string(name) + "'");
  *f = value;
}

ModelParams fig3_params() { return ModelParams{}; }

ModelParams btc_fit_params() {
  ModelParams p;
  p.n_agents = 500;
  p.lambda_e = 1e-7;
  p.eps_fc = 5;
  p.eps_cf = 2;
  p.xi0 = 0.2;
  p.lambda_m = 10;
  p.lambda_tc = 25;
  p.lambda_tf = 75;
  p.lambda_0 = 0.4;
  p.alpha = 2;
  p.gamma_k = 4;
  p.gamma_theta = 15.5;
  p.p_f = 3e4;
  return p;
}

ModelParams nyse_fit_params() {
  ModelParams p = btc_fit_params();
  p.xi0 = 1;
  p.lambda_tc = 2;
  p.lambda_0 = 1.5;
  return p;
}

}  // namespace herdbook::model
