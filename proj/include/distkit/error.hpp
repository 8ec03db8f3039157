#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace distkit {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class LengthMismatch : public Error {
 public:
  using Error::Error;
};

/// Imaginary residue of an inverse transform exceeded tolerance.
class ResidueError : public Error {
 public:
  using Error::Error;
};

class NotLattice : public Error {
 public:
  using Error::Error;
};

class IncompatibleLattices : public Error {
 public:
  using Error::Error;
};

class SupportError : public Error {
 public:
  using Error::Error;
};

class ZeroDivisorMass : public Error {
 public:
  using Error::Error;
};

class CarrierMismatch : public Error {
 public:
  using Error::Error;
};

/// Errors raised while reading expression text. Line and column are 1-based.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : Error(what + " at line " + std::to_string(line) + ", column " +
              std::to_string(column)),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class SyntaxError : public ParseError {
 public:
  using ParseError::ParseError;
};

class UnknownConstructor : public ParseError {
 public:
  using ParseError::ParseError;
};

class ArityError : public ParseError {
 public:
  using ParseError::ParseError;
};

/// An evaluation failure with the source position of the offending node.
class EvalError : public Error {
 public:
  EvalError(const std::string& what, std::size_t line, std::size_t column)
      : Error(what + " (at line " + std::to_string(line) + ", column " +
              std::to_string(column) + ")"),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace distkit
