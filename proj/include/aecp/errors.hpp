// errors.hpp — exception types raised by the engine

#pragma once

#include <stdexcept>
#include <string>

namespace aecp {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// Raised when the zero eigenvalue of a generator is absent or degenerate.
class ZeroNotSimple : public Error {
 public:
  using Error::Error;
};

/// Least-squares residual exceeded tolerance: the right-hand side is not in
/// the image of the operator (cutoff too small, or a broken recursion).
class NotSolvable : public Error {
 public:
  using Error::Error;
};

class SingularGauge : public Error {
 public:
  using Error::Error;
};

class NotHermPreserving : public Error {
 public:
  using Error::Error;
};

class NotConjugateClosed : public Error {
 public:
  using Error::Error;
};

class RequiresZeroDetuning : public Error {
 public:
  using Error::Error;
};

class FitIllConditioned : public Error {
 public:
  using Error::Error;
};

/// Invalid physical or run parameters (maps to CLI exit code 2).
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

}  // namespace aecp
