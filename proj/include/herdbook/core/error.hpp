#pragma once

#include <stdexcept>
#include <string>

namespace herdbook {

// Invalid parameters or configuration, detected before any work starts.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

// A formula evaluated outside the region where it is defined.
class DomainError : public std::domain_error {
 public:
  explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// Zero variance, zero mean, all-zero input and similar.
class DegenerateSeriesError : public std::runtime_error {
 public:
  explicit DegenerateSeriesError(const std::string& what) : std::runtime_error(what) {}
};

// Input data that cannot be used (malformed files, empty ranges, short series).
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// All event rates vanished; the Gillespie clock cannot advance.
class FrozenMarketError : public std::runtime_error {
 public:
  explicit FrozenMarketError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical integration produced a non-finite state.
class InstabilityError : public std::runtime_error {
 public:
  explicit InstabilityError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace herdbook
