#pragma once

#include <stdexcept>
#include <string>

namespace randsg {

/// Root of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed argument: wrong dimension, out-of-range scalar, empty input.
class InputError : public Error {
 public:
  using Error::Error;
};

/// The problem lacks something the operation needs (e.g. a true gradient).
class CapabilityError : public Error {
 public:
  using Error::Error;
};

/// A theoretical precondition is violated (e.g. a stepsize at or above 2/L).
class ValidityError : public Error {
 public:
  using Error::Error;
};

/// Inputs are well-formed but degenerate (e.g. coincident trial points).
class DegenerateInputError : public Error {
 public:
  using Error::Error;
};

/// An iterate became non-finite.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, long iteration)
      : Error(what), iteration_(iteration) {}
  long iteration() const noexcept { return iteration_; }

 private:
  long iteration_;
};

}  // namespace randsg
