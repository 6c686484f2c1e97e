#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace epix {

// Base of every error the library raises. Callers that only care about
// "something in epix failed" catch this.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class EmptyInput : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Malformed record in a line-delimited file. line() is 1-based; 0 when the
// error is not tied to a particular line.
class SchemaError : public Error {
 public:
  SchemaError(std::string message, std::size_t line = 0)
      : Error(line ? "line " + std::to_string(line) + ": " + message : message), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class BudgetExhausted : public Error {
 public:
  using Error::Error;
};

class TransportError : public Error {
 public:
  using Error::Error;
};

class CacheMiss : public TransportError {
 public:
  using TransportError::TransportError;
};

class AuthError : public TransportError {
 public:
  using TransportError::TransportError;
};

class NoIsland : public Error {
 public:
  using Error::Error;
};

class AlignmentError : public Error {
 public:
  using Error::Error;
};

class EmptyReport : public Error {
 public:
  using Error::Error;
};

}  // namespace epix
