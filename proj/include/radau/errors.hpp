#pragma once

#include <stdexcept>
#include <string>

namespace radau {

/// Base class of all numerical and contract errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the supported range (stage count, grid size, ...).
class RangeError : public Error {
 public:
  using Error::Error;
};

/// A scalar argument lies outside the domain of a function.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Vector or matrix dimensions do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A factorization hit a zero pivot or a numerically singular matrix.
class FactorizationError : public Error {
 public:
  FactorizationError(const std::string& what, int index = -1)
      : Error(what), index_(index) {}
  /// Offending pivot/diagonal index, or -1 when not applicable.
  int index() const { return index_; }

 private:
  int index_;
};

/// Repeated diagonal entries prevent the triangular eigen-recursion.
class DegeneracyError : public Error {
 public:
  using Error::Error;
};

/// A matrix expected to be positive definite is not.
class DefinitenessError : public Error {
 public:
  using Error::Error;
};

/// Operation not supported for the given input (e.g. non-polynomial symbol).
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// An iterative solver did not converge.
class SolverError : public Error {
 public:
  SolverError(const std::string& what, int block, double residual)
      : Error(what), block_(block), residual_(residual) {}
  int block() const { return block_; }
  double residual() const { return residual_; }

 private:
  int block_;
  double residual_;
};

}  // namespace radau
