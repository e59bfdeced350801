/// @file error.hpp
/// @brief exception hierarchy shared by all surfarea modules

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace surfarea {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parameter is outside the range an operation accepts.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A point, line or rectangle lies outside the domain of a field.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A triangulation or subdivision fails its structural invariants.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Raised by condition-C checks when the small rectangles are not
/// covered by the large ones (distinct from a false verdict).
class ContainmentError : public Error {
 public:
  using Error::Error;
};

/// Text input (grid files, field descriptors) could not be parsed.
class ParseError : public Error {
 public:
  ParseError(const std::string& source, std::size_t line, std::size_t column,
             const std::string& what)
      : Error(source + ":" + std::to_string(line) + ":" +
              std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace surfarea
