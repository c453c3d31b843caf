#pragma once

#include <stdexcept>
#include <string>

namespace effsens {

/// A caller violated a documented precondition (bad index, point outside a
/// domain, mismatched lengths).
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The estimator cannot run with the requested configuration (sample too
/// small, invalid override).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input data is malformed: non-finite values, non-numeric cells.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace effsens
