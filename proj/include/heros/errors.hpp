#pragma once

#include <stdexcept>
#include <string>

namespace heros {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Cost vector is empty, non-positive, non-finite, or not normalizable.
struct InvalidCosts : Error {
  using Error::Error;
};

// Instance/feature dimensionality does not match what a component expects.
struct ShapeMismatch : Error {
  using Error::Error;
};

// Instance carries NaN/Inf features or an out-of-range label.
struct InvalidInstance : Error {
  using Error::Error;
};

// File or config could not be parsed; carries a 1-based line number when known.
struct ParseError : Error {
  explicit ParseError(const std::string& msg, long line = -1)
      : Error(line >= 0 ? "line " + std::to_string(line) + ": " + msg : msg),
        line_number(line) {}
  long line_number;
};

// Budget/selection parameters out of range (k < 1, zeta outside [0,1], ...).
struct InvalidBudget : Error {
  using Error::Error;
};

// A stream source yielded nothing where at least one instance is required.
struct EmptyStream : Error {
  using Error::Error;
};

// Moment fit outside the valid parameter region.
struct InvalidFit : Error {
  using Error::Error;
};

}  // namespace heros
