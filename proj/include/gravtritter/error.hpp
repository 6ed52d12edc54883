#pragma once

#include <stdexcept>
#include <string>

namespace gravtritter {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the operation (chi <= 0, an
/// observer inside the horizon, an empty comb, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Overlap data that cannot come from orthonormal mode pairs.
class InconsistencyError : public Error {
 public:
  using Error::Error;
};

/// A JSON document does not match the expected schema (missing or unknown
/// keys, wrong types).
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// Two profiles are numerically parallel.
class DegeneracyError : public Error {
 public:
  using Error::Error;
};

/// Adaptive quadrature ran out of its evaluation budget.
class QuadratureError : public Error {
 public:
  QuadratureError(const std::string& what, double achieved_error)
      : Error(what), achieved_error_(achieved_error) {}
  double achieved_error() const noexcept { return achieved_error_; }

 private:
  double achieved_error_;
};

/// An iterative solver stopped before meeting its tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

}  // namespace gravtritter
