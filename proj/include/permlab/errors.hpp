#pragma once

#include <stdexcept>
#include <string>

namespace permlab {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Mismatched or unsupported matrix/vector shapes.
struct DimensionError : Error {
  using Error::Error;
};

// Input value outside the mathematical domain of an operation
// (nonpositive entry, nonfinite value, empty term list, ...).
struct DomainError : Error {
  using Error::Error;
};

// Matrix fails a required symmetry tolerance.
struct SymmetryError : Error {
  using Error::Error;
};

// Problem size exceeds a hard enumeration guard.
struct SizeError : Error {
  using Error::Error;
};

// Iterative solver ran out of iterations; carries the last residual.
struct ConvergenceError : Error {
  ConvergenceError(const std::string& what, double residual_)
      : Error(what), residual(residual_) {}
  double residual;
};

// Enumeration would exceed the configured table budget; carries the estimate.
struct BudgetError : Error {
  BudgetError(const std::string& what, double estimated_tables_)
      : Error(what), estimated_tables(estimated_tables_) {}
  double estimated_tables;
};

// The fluctuation determinant is (numerically) zero: the asymptotic
// prediction does not apply. Carries the offending determinant.
struct DegenerateSpectrumError : Error {
  DegenerateSpectrumError(const std::string& what, double determinant_)
      : Error(what), determinant(determinant_) {}
  double determinant;
};

// A structured input does not satisfy the contract of the operation
// (e.g. a matrix that is not doubly stochastic enough).
struct InputError : Error {
  using Error::Error;
};

}  // namespace permlab
