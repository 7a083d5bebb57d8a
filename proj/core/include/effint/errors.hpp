#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace effint {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (bad permutation, marker clash, ...).
class ArgumentError : public Error {
 public:
  using Error::Error;
};

/// A tuple is not a well-formed code of a (tuple, natural) pair.
class DecodeError : public Error {
 public:
  using Error::Error;
};

/// Both the positive and the negative side of a Delta scheme fired on one tuple.
class SchemeUnsound : public Error {
 public:
  using Error::Error;
};

/// A functor produced evidence for both sides of a dichotomy that must be exclusive.
class FunctorBroken : public Error {
 public:
  using Error::Error;
};

/// A total computation ran out of fuel. Carries the offending query.
class FuelExhausted : public Error {
 public:
  FuelExhausted(std::string what, std::uint64_t query)
      : Error(std::move(what)), query_(query) {}

  std::uint64_t query() const { return query_; }

 private:
  std::uint64_t query_;
};

/// A bounded search gave up before reaching an answer.
class BudgetExhausted : public Error {
 public:
  using Error::Error;
};

/// Malformed text input; `line()` is 1-based.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

}  // namespace effint
