#pragma once

#include <stdexcept>
#include <string>

namespace cartan {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An exact operation would leave the int64 range of the rational representation.
class ArithmeticOverflow : public Error {
 public:
  using Error::Error;
};

class LengthMismatch : public Error {
 public:
  using Error::Error;
};

/// Operands live in different (N, B) contexts or different algebras.
class ContextMismatch : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// An element is outside the subalgebra a module is defined for.
class NotInSubalgebra : public Error {
 public:
  using Error::Error;
};

/// Structural invariants of an input object (B table, representation) fail.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

/// An action would produce support outside the degree window.
class WindowOverflow : public Error {
 public:
  WindowOverflow(const std::string& what, int stage = 0)
      : Error(what), stage_(stage) {}

  /// 1-based position in an operator word (application order); 0 for a single action.
  int stage() const noexcept { return stage_; }

 private:
  int stage_;
};

}  // namespace cartan
