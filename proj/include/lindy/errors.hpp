// Error types shared across the library. The CLI maps them to exit codes:
// ConfigError -> 2, CapacityError -> 3, CheckFailure -> 1.
#pragma once

#include <stdexcept>
#include <string>

namespace lindy {

// A request walked past the largest index/level the tables support.
class CapacityError : public std::runtime_error {
public:
  explicit CapacityError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed configuration: grammar errors, invalid parameter ranges.
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A verified invariant failed; carries the witnessing input description.
class CheckFailure : public std::runtime_error {
public:
  explicit CheckFailure(const std::string& what) : std::runtime_error(what) {}
};

} // namespace lindy
