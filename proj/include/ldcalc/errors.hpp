#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ldc {

// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// A literal was found in subject or predicate position of a triple.
class LiteralInSubject : public ParseError {
 public:
  using ParseError::ParseError;
};

class UnboundVariable : public ParseError {
 public:
  UnboundVariable(const std::string& variable, std::size_t line, std::size_t column);
  const std::string& variable() const { return variable_; }

 private:
  std::string variable_;
};

// A substitution would map a name variable to a literal or vice versa.
class SortError : public Error {
 public:
  using Error::Error;
};

class NonGroundConstraint : public Error {
 public:
  using Error::Error;
};

class TypeMismatch : public Error {
 public:
  using Error::Error;
};

// A query variable is free where a closed process or query is required.
class OpenProcess : public Error {
 public:
  using Error::Error;
};

class OpenQuery : public Error {
 public:
  using Error::Error;
};

class StateExplosion : public Error {
 public:
  using Error::Error;
};

class ExtrudedConclusion : public Error {
 public:
  using Error::Error;
};

// A derivation failed to replay: a rule was applied outside its side conditions.
class InvalidDerivation : public Error {
 public:
  using Error::Error;
};

}  // namespace ldc
