#pragma once

#include <stdexcept>
#include <string>

namespace robustgame {

// Base class for every error raised by the library. The CLI maps the
// concrete subclasses onto exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or out-of-contract user data: shapes, ranges, indices.
class InputError : public Error {
 public:
  using Error::Error;
};

// A file could not be parsed (model JSON, tensor CSV, PGM/PPM header).
class ParseError : public InputError {
 public:
  using InputError::InputError;
};

// Inconsistent run configuration (missing constants, wrong mode, no budget).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// L0 passed to an operation that carries a guarantee.
class UnsupportedMetricError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

// A forward pass produced NaN/Inf; usually corrupt weights.
class NumericError : public Error {
 public:
  using Error::Error;
};

// A fixed strategy profile did not reach a terminal state within its cap.
class NonterminationError : public Error {
 public:
  using Error::Error;
};

// An exhaustive reference computation exceeded its state budget.
class OracleTooLargeError : public Error {
 public:
  using Error::Error;
};

}  // namespace robustgame
