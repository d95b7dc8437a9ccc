#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace weightlab {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Cube or field access outside the grid, or invalid field contents.
class DomainError : public Error {
 public:
  using Error::Error;
};

class EmptyFamilyError : public Error {
 public:
  using Error::Error;
};

class GridMismatchError : public Error {
 public:
  using Error::Error;
};

// A caller broke an operation's precondition (bad exponent, bad ladder, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t offset, const std::string& message)
      : Error(message + " at offset " + std::to_string(offset)), offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

// Well-formed but meaningless weight specification (c <= 0, lo >= hi, ...).
class SpecError : public Error {
 public:
  using Error::Error;
};

class IntegrabilityError : public Error {
 public:
  using Error::Error;
};

class QuadratureError : public Error {
 public:
  using Error::Error;
};

// Two inputs that must describe the same object (a weight and its dual) do not.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

class ArityError : public Error {
 public:
  using Error::Error;
};

}  // namespace weightlab
