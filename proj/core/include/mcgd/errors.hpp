#pragma once

#include <stdexcept>
#include <string>

namespace mcgd {

// Invalid configuration, dimensions, or parameters. CLI exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Numerical failure (divergence, non-finite values). CLI exit code 3.
struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& what, long iteration = -1)
      : std::runtime_error(what), iteration(iteration) {}
  long iteration;
};

// File system / serialization failure. CLI exit code 4.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace mcgd
