#pragma once

#include <stdexcept>
#include <string>

namespace qasfg {

// Raised for bad inputs: out-of-range wavelengths, invalid specs, malformed
// config. The CLI maps these to exit code 2.
class InputError : public std::invalid_argument {
public:
  explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

// Raised when a computation cannot produce a valid result from valid input
// (singular period, non-finite integrand, boundary minimum). Exit code 1.
class NumericError : public std::runtime_error {
public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace qasfg
