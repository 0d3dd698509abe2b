#pragma once

#include <stdexcept>
#include <string>

namespace stirap {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Invalid user input: bad scheme, out-of-range parameter, malformed config.
struct ConfigError : Error {
  ConfigError(std::string path_, const std::string& msg)
      : Error(path_.empty() ? msg : path_ + ": " + msg), path(std::move(path_)) {}
  std::string path;
};

// Numerical failure during integration or spectral tracking.
struct NumericError : Error {
  using Error::Error;
};

}  // namespace stirap
