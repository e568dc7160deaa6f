#pragma once

#include <stdexcept>
#include <string>

namespace mbasis {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  DimensionMismatch(const std::string& what, long expected, long actual)
      : Error(what + ": expected dimension " + std::to_string(expected) +
              ", got " + std::to_string(actual)) {}
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A vector system or Hilbert structure that is degenerate for the requested
/// construction (zero vector, kernel of G, dependent columns, ...).
class DegenerateSystem : public Error {
 public:
  using Error::Error;
};

/// An optimization problem without a feasible point.
class Infeasible : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace mbasis
