#pragma once

#include <stdexcept>
#include <string>

namespace dremnorm {

/// Raised when a simulation or estimator produces non-finite or divergent values.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised for malformed or inconsistent experiment configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace dremnorm
