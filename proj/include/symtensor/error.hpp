#pragma once

#include <stdexcept>
#include <string>

namespace symtensor {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes are incompatible or violate a shape invariant.
class ShapeError : public Error {
public:
  using Error::Error;
};

/// Operands mix real and complex data.
class FieldError : public Error {
public:
  using Error::Error;
};

/// An input violates a documented precondition.
class PreconditionError : public Error {
public:
  using Error::Error;
};

/// A computed result failed its postcondition. `invariant()` names the check.
class ContractViolation : public Error {
public:
  ContractViolation(std::string invariant, const std::string& detail)
      : Error(invariant + ": " + detail), invariant_(std::move(invariant)) {}

  const std::string& invariant() const noexcept { return invariant_; }

private:
  std::string invariant_;
};

/// Malformed tensor, vector or form file.
class ParseError : public Error {
public:
  using Error::Error;
};

}  // namespace symtensor
