#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bcslab {

/// Base class for every domain error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Input text did not follow a file format. Lines and columns are 1-based.
class ParseError : public Error {
public:
  ParseError(std::size_t line, std::size_t column, const std::string &message)
      : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
        line_(line), column_(column) {}

  [[nodiscard]] std::size_t line() const { return line_; }
  [[nodiscard]] std::size_t column() const { return column_; }

private:
  std::size_t line_;
  std::size_t column_;
};

/// A size guard (qubits, dimension, enumeration budget) was exceeded.
class GuardError : public Error {
public:
  using Error::Error;
};

} // namespace bcslab
