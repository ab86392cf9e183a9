#pragma once

#include <stdexcept>
#include <string>

namespace deltamix {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller violated a documented precondition (e.g. non-Hermitian Hamiltonian).
class ContractError : public Error {
 public:
  using Error::Error;
};

/// Fixed-step integration lost trace beyond tolerance.
class IntegrationError : public Error {
 public:
  using Error::Error;
};

/// Liouvillian null space is not one-dimensional.
class DegenerateSteadyStateError : public Error {
 public:
  using Error::Error;
};

/// Weak-field order extraction did not behave perturbatively.
class NonperturbativeError : public Error {
 public:
  using Error::Error;
};

/// A ratio of linewidths was requested with a zero denominator.
class SingularRatioError : public Error {
 public:
  using Error::Error;
};

/// Output normalization by a zero input amplitude.
class NormalizationError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class ParseError : public ConfigError {
 public:
  ParseError(int line, int column, const std::string& what)
      : ConfigError("parse error at line " + std::to_string(line) + ", column " +
                    std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

class ValidationError : public ConfigError {
 public:
  ValidationError(std::string field, const std::string& constraint)
      : ConfigError("invalid value for '" + field + "': " + constraint), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace deltamix
