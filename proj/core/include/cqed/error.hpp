#pragma once

#include <stdexcept>
#include <string>

namespace cqed {

/// Invalid user configuration (bad keys, out-of-range values, inconsistent options).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical routine could not produce a result meeting its accuracy contract.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cqed
