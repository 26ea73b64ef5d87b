#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace mealy {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A machine table violates one of the structural invariants.
class InvalidMachine : public Error {
 public:
  using Error::Error;
};

/// An operation was called outside its documented domain
/// (wrong number of states, non-invertible input, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// A size or time budget would be exceeded. `required` carries the
/// size that was asked for, when it is known.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(std::string what, std::uint64_t required)
      : Error(std::move(what)), required_(required) {}

  std::uint64_t required() const noexcept { return required_; }

 private:
  std::uint64_t required_;
};

/// An internal consistency check failed; indicates a bug.
class InternalError : public Error {
 public:
  using Error::Error;
};

/// Malformed machine document.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error("line " + std::to_string(line) + ", column " +
              std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace mealy
