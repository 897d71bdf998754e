#pragma once

#include <stdexcept>

namespace chanest {

/// Base class for every failure the library reports.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Operand dimensions violate the operation's contract.
struct ShapeError : Error {
  using Error::Error;
};

/// A matrix is singular (or numerically singular) where an inverse is needed.
struct SingularMatrixError : Error {
  using Error::Error;
};

/// Invalid configuration; the message names the offending field.
struct ConfigError : Error {
  using Error::Error;
};

/// Input is degenerate for the requested metric (e.g. zero reference norm).
struct DegenerateInputError : Error {
  using Error::Error;
};

}  // namespace chanest
