#pragma once

#include <stdexcept>
#include <string>

namespace mmc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shapes of two operands do not agree, or an index is out of bounds.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Caller-supplied data or parameters violate a precondition.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Malformed text input. The message carries the 1-based line number.
class ParseError : public InputError {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : InputError(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A computation produced non-finite values or diverged.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace mmc
