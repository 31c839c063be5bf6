#pragma once

#include <stdexcept>
#include <string>

namespace fracgap {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation (poles, alpha range, |z| >= 1, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A series or iteration hit its term/iteration cap before reaching tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Discretization too coarse for the requested quantity.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

/// Eigensolver or factorization failure.
class SolverError : public Error {
 public:
  using Error::Error;
};

/// Invalid or unsupported run configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace fracgap
