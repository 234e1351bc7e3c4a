#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace ulam {

// Base of every error raised by the library. The CLI maps the concrete type
// onto its exit-code contract.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Request exceeds a configured size limit (exact enumeration, brute force).
class CapacityError : public Error {
 public:
  using Error::Error;
};

// Invalid combination of parameters or mismatched inputs.
class UsageError : public Error {
 public:
  using Error::Error;
};

// A symmetric positive-definite factorization broke down.
class ConditioningError : public Error {
 public:
  ConditioningError(const std::string& what, double condition_estimate)
      : Error(what), condition_estimate_(condition_estimate) {}
  double condition_estimate() const noexcept { return condition_estimate_; }

 private:
  double condition_estimate_;
};

// A truncated sum or product cannot certify the requested accuracy.
class TruncationError : public Error {
 public:
  TruncationError(const std::string& what, double bound)
      : Error(what), bound_(bound) {}
  double bound() const noexcept { return bound_; }

 private:
  double bound_;
};

// Nonlinear solver failed; carries the update norm of each iteration.
class SolverError : public Error {
 public:
  SolverError(const std::string& what, std::vector<double> trace)
      : Error(what), trace_(std::move(trace)) {}
  const std::vector<double>& trace() const noexcept { return trace_; }

 private:
  std::vector<double> trace_;
};

// Discretization or quadrature could not reach the requested tolerance.
class AccuracyError : public Error {
 public:
  using Error::Error;
};

}  // namespace ulam
