#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gpif {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Division by zero, non-invertible residues, mixed moduli.
class ArithmeticError : public Error {
 public:
  using Error::Error;
};

/// An operation was called outside its mathematical precondition
/// (zero polynomial, non-prime modulus, N = M, prime not in Ass, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Size caps on rings, lattices and modules.
class LimitError : public Error {
 public:
  using Error::Error;
};

/// Bad configuration of a property run (unknown id, empty family).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Script syntax or name-resolution errors, carrying a 1-based position.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace gpif
