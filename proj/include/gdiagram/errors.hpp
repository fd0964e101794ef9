#pragma once

#include <stdexcept>
#include <string>

namespace gdiag {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SortError : public Error {
 public:
  using Error::Error;
};

class UnknownSymbolError : public Error {
 public:
  using Error::Error;
};

class ResourceLimitError : public Error {
 public:
  using Error::Error;
};

/// Raised when a diagram, an axiom instance or a proposed assignment
/// collapses True onto False.
class InconsistencyError : public Error {
 public:
  using Error::Error;
};

/// Syntax error with a 1-based source location.
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, int line, int column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
        message_(msg),
        line_(line),
        column_(column) {}

  const std::string& message() const { return message_; }
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  std::string message_;
  int line_;
  int column_;
};

}  // namespace gdiag
