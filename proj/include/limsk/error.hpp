#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace limsk {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A path, relation or map whose endpoints do not line up.
class TypingError : public Error {
 public:
  using Error::Error;
};

/// Malformed input data: duplicate ids, dangling references, broken cones.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A precondition that the caller had to establish does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class UnsupportedShape : public Error {
 public:
  using Error::Error;
};

/// Raised when a computation needs a finite category and the bounds ran out.
class UndecidedError : public Error {
 public:
  using Error::Error;
};

/// DSL error with a 1-based source position.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " +
              message),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace limsk
