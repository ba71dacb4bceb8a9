#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hrvwp {

/// Base for every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An input violates an operation precondition or a type invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Malformed text input. Line numbers are 1-based.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A feature cannot be computed for this recording (empty component, zero energy).
class FeatureError : public Error {
 public:
  using Error::Error;
};

/// Data whose statistics are undefined, e.g. zero error variance in an ANOVA.
class DegenerateDataError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace hrvwp
