#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace polygrowth {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Syntax error in an expression or input file; `position` is a 0-based
/// offset into the offending text (or line number for line-oriented input).
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, std::size_t position)
      : Error(msg), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Mathematical precondition violated (log of a nonpositive interval,
/// division by an interval containing zero, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Input polynomial is outside the class the analysis handles
/// (degree < 2, leading sign that rules out divergence to +infinity, ...).
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// An enclosure is too wide for the requested derivation; the caller
/// should recompute the underlying constant with a smaller target radius.
class PrecisionError : public Error {
 public:
  using Error::Error;
};

/// Orbit classification did not certify divergence, so growth-constant
/// machinery cannot run.
class NotDivergentError : public Error {
 public:
  using Error::Error;
};

}  // namespace polygrowth
