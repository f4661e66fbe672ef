#pragma once

#include <stdexcept>
#include <string>

namespace lccd {

/// Thrown when data handed to an operation violates its contract
/// (mismatched sizes, out-of-range values, malformed or truncated files).
class InvalidInputError : public std::runtime_error {
public:
    explicit InvalidInputError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Thrown when a configuration value or combination of values is unusable.
class InvalidConfigError : public std::runtime_error {
public:
    explicit InvalidConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace lccd
