#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace steffkit {

// Base class for everything thrown by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
  DimensionMismatch(std::size_t got, std::size_t want)
      : Error("dimension mismatch: got " + std::to_string(got) + ", expected " +
              std::to_string(want)) {}
};

class PrecisionMismatch : public Error {
 public:
  using Error::Error;
  PrecisionMismatch(unsigned a, unsigned b)
      : Error("mixed precision contexts in one operation: " + std::to_string(a) +
              " vs " + std::to_string(b) + " bits") {}
};

class SingularOperator : public Error {
 public:
  using Error::Error;
  SingularOperator() : Error("singular linear operator") {}
};

class NonFinite : public Error {
 public:
  using Error::Error;
  NonFinite() : Error("non-finite value encountered") {}
};

// Divided difference denominator x_j - y_j too small relative to x_j.
// The stored index is zero-based.
class CoincidentComponent : public Error {
 public:
  explicit CoincidentComponent(std::size_t j)
      : Error("coincident component " + std::to_string(j) +
              " in divided difference operands"),
        component_(j) {}
  std::size_t component() const { return component_; }

 private:
  std::size_t component_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line, int col)
      : Error(what + " at line " + std::to_string(line) + ", column " +
              std::to_string(col)),
        line_(line),
        col_(col) {}
  int line() const { return line_; }
  int col() const { return col_; }

 private:
  int line_;
  int col_;
};

class UnknownVariable : public ParseError {
 public:
  UnknownVariable(const std::string& name, int line, int col)
      : ParseError("unknown variable '" + name + "'", line, col) {}
};

class ArityError : public Error {
 public:
  ArityError(std::size_t got, std::size_t want)
      : Error("system defines " + std::to_string(got) +
              " expression(s) but dimension is " + std::to_string(want)) {}
};

class InsufficientIterates : public Error {
 public:
  InsufficientIterates()
      : Error("convergence order estimate needs at least three increments") {}
};

class ZeroIncrement : public Error {
 public:
  ZeroIncrement()
      : Error("convergence order estimate hit an exactly zero increment") {}
};

class NonconformingWeight : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace steffkit
