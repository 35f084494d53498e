#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rdfcomp {

// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Syntax error in a graph, query or statement text. Line and column are
// 1-based; column 0 means "somewhere on the line".
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message)
      : Error("line " + std::to_string(line) + ":" + std::to_string(column) +
              ": " + message),
        line_(line),
        column_(column),
        detail_(message) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string detail_;
};

// An input term lives in the namespace reserved for frozen variables.
class FreezeCollision : public Error {
 public:
  using Error::Error;
};

// A statement outside the SP fragment was handed to an SP-only component.
class FragmentViolation : public Error {
 public:
  using Error::Error;
};

class NotFound : public Error {
 public:
  using Error::Error;
};

// Transient failure (remote fetch, I/O); the caller may retry.
class RetryableError : public Error {
 public:
  using Error::Error;
};

}  // namespace rdfcomp
