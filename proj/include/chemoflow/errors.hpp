#pragma once

#include <stdexcept>
#include <string>

namespace chemoflow {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad user-supplied value (negative coefficient, eps outside (0,1), ...).
struct ParameterError : Error {
  using Error::Error;
};

// Operation asked for a regime outside the three supported cases.
struct UnsupportedRegimeError : Error {
  using Error::Error;
};

// Non-finite value produced where finite math was expected.
struct NumericError : Error {
  using Error::Error;
};

// The time integration produced NaN/Inf; carries the field name and time.
struct BlowupError : Error {
  BlowupError(const std::string& field_name, double at_time)
      : Error("non-finite values in field '" + field_name + "' at t=" + std::to_string(at_time)),
        field(field_name),
        time(at_time) {}
  std::string field;
  double time;
};

// Requested dt exceeds the stability bound.
struct StepRejectionError : Error {
  using Error::Error;
};

// The trajectory never satisfied the equilibrium bracketing condition.
struct NoSandwichError : Error {
  using Error::Error;
};

// Malformed input to a series operation (unsorted times, too few samples).
struct InputError : Error {
  using Error::Error;
};

// Configuration document problems; message carries the key path.
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace chemoflow
