#pragma once

#include <stdexcept>
#include <string>

namespace pcsplit {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on a scalar argument was violated (beta <= 0, nu outside (0,1), ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// The quadratic subproblem matrix H + beta*A^T*A is singular and no set
/// constraint is present to make the minimizer unique.
class SingularSystem : public Error {
 public:
  using Error::Error;
};

/// An inner iterative solver hit its iteration cap before certifying accuracy.
class NonConvergence : public Error {
 public:
  using Error::Error;
};

/// Q^T + Q - M^T H M disagreed with the hand-derived closed form; always a factory bug.
class ClosedFormMismatch : public Error {
 public:
  using Error::Error;
};

class MissingReference : public Error {
 public:
  using Error::Error;
};

/// Malformed JSON or CSV input. The message names the offending key or line.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace pcsplit
