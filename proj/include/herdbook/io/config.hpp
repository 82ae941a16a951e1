#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "herdbook/model/params.hpp"
#include "herdbook/model/simulation.hpp"

namespace herdbook::io {

/// Flat `key = value` entries. Blank lines and lines starting with '#' are
/// ignored; a repeated key keeps its last value.
using KeyValues = std::map<std::string, std::string, std::less<>>;

/// Throws ConfigError naming the line for anything that is not key=value.
KeyValues parse_key_values(std::istream& in);
KeyValues read_key_values(const std::string& path);

/// Applies one `key=value` override, replacing any earlier value.
void apply_override(KeyValues& kv, std::string_view assignment);

/// Run keys accepted next to the model parameter keys.
inline constexpr std::string_view kRunKeys[] = {"horizon_s", "sample_interval_s", "burn_in_s", "seed",
                                                "spread_policy"};

struct ResolvedConfig {
  model::ModelParams params;
  model::RunConfig run;
};

/// Builds parameters from entries. Without a base every model key is
/// required; with one, missing keys keep the base values. Throws ConfigError
/// for a missing or unknown key, an unparsable value, or invalid parameters,
/// always naming the key.
ResolvedConfig resolve_config(const KeyValues& kv, const std::optional<model::ModelParams>& base = std::nullopt);

/// Every model and run key with its resolved value; parses back to the same
/// configuration.
KeyValues to_key_values(const ResolvedConfig& config);
std::string format_key_values(const KeyValues& kv);

/// Shortest text that reads back to the same double.
std::string format_double(double v);
double parse_double(std::string_view text, std::string_view key);  // throws ConfigError

}  // namespace herdbook::io
