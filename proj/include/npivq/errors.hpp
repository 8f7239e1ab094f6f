#pragma once

#include <stdexcept>
#include <string>

namespace npivq {

// Bad arguments, malformed data, violated preconditions. CLI maps these to exit 2.
class InvalidInputError : public std::invalid_argument {
 public:
  explicit InvalidInputError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Numerical failures during estimation (singular Gram, ill-posedness overflow,
// quadrature breakdown). CLI maps these to exit 3.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

// Cost guards tripped (e.g. brute-force oracle asked for a sample it refuses).
class ResourceError : public std::runtime_error {
 public:
  explicit ResourceError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace npivq
