#include "herdbook/io/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "herdbook/core/error.hpp"

namespace herdbook::io {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool is_run_key(std::string_view key) {
  for (auto k : kRunKeys)
    if (k == key) return true;
  return false;
}

std::uint64_t parse_seed(std::string_view text) {
  std::uint64_t v;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw ConfigError("seed must be a nonnegative integer, got '" + std::string(text) + "'");
  return v;
}

}  // namespace

std::string format_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

double parse_double(std::string_view text, std::string_view key) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v))
    throw ConfigError(std::string(key) + ": cannot parse '" + std::string(text) + "' as a number");
  return v;
}

KeyValues parse_key_values(std::istream& in) {
  KeyValues kv;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto s = trim(line);
    if (s.empty() || s.front() == '#') continue;
    const auto eq = s.find('=');
    if (eq == std::string_view::npos || trim(s.substr(0, eq)).empty())
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    kv[std::string(trim(s.substr(0, eq)))] = std::string(trim(s.substr(eq + 1)));
  }
  return kv;
}

KeyValues read_key_values(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_key_values(in);
}

void apply_override(KeyValues& kv, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || trim(assignment.substr(0, eq)).empty())
    throw ConfigError("override '" + std::string(assignment) + "' is not key=value");
  kv[std::string(trim(assignment.substr(0, eq)))] = std::string(trim(assignment.substr(eq + 1)));
}

ResolvedConfig resolve_config(const KeyValues& kv, const std::optional<model::ModelParams>& base) {
  for (const auto& [key, value] : kv) {
    if (!model::is_param_name(key) && !is_run_key(key)) throw ConfigError("unknown config key '" + key + "'");
  }
  ResolvedConfig out;
  out.params = base.value_or(model::ModelParams{});
  for (auto name : model::kParamNames) {
    const auto it = kv.find(name);
    if (it == kv.end()) {
      if (!base) throw ConfigError("missing required key '" + std::string(name) + "'");
      continue;
    }
    model::set_param(out.params, name, parse_double(it->second, name));
  }
  out.params.validate();

  if (auto it = kv.find("horizon_s"); it != kv.end()) out.run.horizon_s = parse_double(it->second, "horizon_s");
  if (auto it = kv.find("sample_interval_s"); it != kv.end())
    out.run.sample_interval_s = parse_double(it->second, "sample_interval_s");
  if (auto it = kv.find("burn_in_s"); it != kv.end()) out.run.burn_in_s = parse_double(it->second, "burn_in_s");
  if (auto it = kv.find("seed"); it != kv.end()) out.run.seed = parse_seed(trim(it->second));
  if (auto it = kv.find("spread_policy"); it != kv.end()) {
    const auto v = trim(it->second);
    if (v == "redraw") out.run.spread_policy = model::SpreadPolicy::RedrawOnExecution;
    else if (v == "fixed") out.run.spread_policy = model::SpreadPolicy::FixedPerTenure;
    else throw ConfigError("spread_policy must be 'redraw' or 'fixed'");
  }
  out.run.validate();
  return out;
}

KeyValues to_key_values(const ResolvedConfig& config) {
  KeyValues kv;
  for (auto name : model::kParamNames) kv[std::string(name)] = format_double(model::get_param(config.params, name));
  kv["horizon_s"] = format_double(config.run.horizon_s);
  kv["sample_interval_s"] = format_double(config.run.sample_interval_s);
  kv["burn_in_s"] = format_double(config.run.burn_in());
  kv["seed"] = std::to_string(config.run.seed);
  kv["spread_policy"] = config.run.spread_policy == model::SpreadPolicy::RedrawOnExecution ? "redraw" : "fixed";
  return kv;
}

std::string format_key_values(const KeyValues& kv) {
  std::ostringstream os;
  for (const auto& [k, v] : kv) os << k << " = " << v << '\n';
  return os.str();
}

}  // namespace herdbook::io
