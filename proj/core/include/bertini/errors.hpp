// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace bertini {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Precondition violated by the caller (bad degree, mismatched fields, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

class DivisionByZero : public Error {
 public:
  DivisionByZero() : Error("division by zero") {}
};

/// An enumeration would exceed one of the configured caps.
class CapExceeded : public Error {
 public:
  using Error::Error;
};

/// Raised when a computation cannot reach a decisive verdict and the
/// caller asked for one.
class Inconclusive : public Error {
 public:
  using Error::Error;
};

/// An internal consistency check failed; indicates a bug.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace bertini
