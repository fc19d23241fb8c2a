#pragma once

#include <stdexcept>

namespace dns2d {

/// Config-document errors; the CLI maps these to exit code 2.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Unrecoverable numerical failure (blow-up, rank collapse); exit code 3.
class NumericalFailure : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace dns2d
