#pragma once

#include <stdexcept>
#include <string>

namespace primfield {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands live over different prime fields.
class FieldMismatch : public Error {
 public:
  FieldMismatch() : Error("field mismatch") {}
};

/// An argument lies outside the domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A size, memory, or time budget would be exceeded.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// Malformed polynomial text, set file, or manifest.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace primfield
