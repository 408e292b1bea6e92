#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace smoothset {

// Base class for every error raised by the library. Numeric domain
// failures are NOT errors: evaluation returns NaN instead (see
// scalar_expr.hpp), so only structural problems throw.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed expression text. `position` is a 0-based byte offset.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t position, const std::string& message)
      : Error(message + " (at position " + std::to_string(position) + ")"),
        position(position) {}
  std::size_t position;
};

class InvalidSharpness : public Error {
 public:
  using Error::Error;
};

class EmptyOperandList : public Error {
 public:
  using Error::Error;
};

// Bisection bracket did not straddle the boundary.
class NoSignChange : public Error {
 public:
  using Error::Error;
};

// Postfix set-expression errors.
class StackUnderflow : public Error {
 public:
  StackUnderflow(std::size_t position)
      : Error("operator has too few operands (at position " +
              std::to_string(position) + ")"),
        position(position) {}
  std::size_t position;
};

class InvalidSymbol : public Error {
 public:
  InvalidSymbol(std::size_t position, char symbol)
      : Error(std::string("invalid symbol '") + symbol + "' (at position " +
              std::to_string(position) + ")"),
        position(position),
        symbol(symbol) {}
  std::size_t position;
  char symbol;
};

class LeftoverOperands : public Error {
 public:
  LeftoverOperands(std::size_t count)
      : Error("expression leaves " + std::to_string(count) +
              " operands on the stack"),
        count(count) {}
  std::size_t count;
};

class UnresolvedName : public Error {
 public:
  UnresolvedName(char name)
      : Error(std::string("undefined set variable '") + name + "'"),
        name(name) {}
  char name;
};

// Region tree contains a node the Desmos exporter cannot express.
class UnsupportedNode : public Error {
 public:
  using Error::Error;
};

class FileFormatError : public Error {
 public:
  FileFormatError(int line, const std::string& message)
      : Error("line " + std::to_string(line) + ": " + message), line(line) {}
  int line;
};

class InvalidGrid : public Error {
 public:
  using Error::Error;
};

class GridTooLarge : public Error {
 public:
  using Error::Error;
};

class GridMismatch : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace smoothset
