#pragma once

#include <stdexcept>
#include <string>

namespace dbmorph {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed mapping source. Carries the 1-based location of the offending token.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, int line, int column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

/// Unknown relation, arity mismatch, duplicate symbol and similar schema-level problems.
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// A column position outside 1..arity.
class IndexError : public Error {
 public:
  using Error::Error;
};

/// A tgd or SOtgd whose universal variables do not all occur in a relational atom.
class SafetyError : public Error {
 public:
  using Error::Error;
};

/// A Skolem table lacks an entry and has no default.
class InterpretationError : public Error {
 public:
  using Error::Error;
};

/// An operation was called outside its documented precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

}  // namespace dbmorph
