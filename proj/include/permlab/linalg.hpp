#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace permlab {

/// Dense real matrix, row-major storage. Small and value-semantic: every
/// matrix in this project is at most a few hundred rows.
class DenseMatrix {
 public:
  DenseMatrix(std::size_t rows, std::size_t cols);
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

  static DenseMatrix identity(std::size_t n);
  static DenseMatrix constant(std::size_t rows, std::size_t cols, double value);
  /// The rank-one projection with every entry 1/n.
  static DenseMatrix uniform_projection(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }

  bool all_finite() const;
  double max_abs() const;

  DenseMatrix transpose() const;
  DenseMatrix operator*(const DenseMatrix& rhs) const;
  DenseMatrix operator+(const DenseMatrix& rhs) const;
  DenseMatrix operator-(const DenseMatrix& rhs) const;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> data_;
};

/// A nonnegative real carried as its natural log; -inf encodes exact zero.
/// Keeps (mn)! -scale quantities representable.
class LogNonneg {
 public:
  LogNonneg() : log_(-std::numeric_limits<double>::infinity()) {}

  static LogNonneg from_log(double log_value);
  static LogNonneg from_value(double value);  // value >= 0
  static LogNonneg zero() { return LogNonneg(); }

  double log() const { return log_; }
  double value() const;  // exp(log), may overflow to +inf
  bool is_zero() const { return log_ == -std::numeric_limits<double>::infinity(); }

  LogNonneg operator*(LogNonneg rhs) const { return from_log(log_ + rhs.log_); }

 private:
  double log_;
};

/// Determinant by LU with partial pivoting; exact sign, deterministic.
double lu_determinant(const DenseMatrix& m);

struct EigenDecomposition {
  std::vector<double> values;  // descending
  DenseMatrix vectors;         // column i pairs with values[i]
};

/// Cyclic Jacobi eigendecomposition of a symmetric matrix.
/// Input must be symmetric within `symmetry_tol` (max |m_ij - m_ji|).
EigenDecomposition symmetric_eigen(const DenseMatrix& m, double symmetry_tol = 1e-12);

/// Eigenvalues only, descending.
std::vector<double> symmetric_eigenvalues(const DenseMatrix& m, double symmetry_tol = 1e-12);

/// ln(k!). Exact prefix sums (compensated) up to k = 10^6, Stirling series
/// beyond. Accurate to a couple of ulps of the result everywhere.
double log_factorial(std::uint64_t k);

/// ln(sum_i exp(terms[i])) by max shift. -inf terms are exact zeros and
/// drop out; an empty list is a domain error.
double log_sum_exp(std::span<const double> terms);

/// Streaming log-sum-exp state. Partial accumulators merge associatively
/// enough that any block partition of the terms agrees with a one-pass sum
/// to ~1e-15 relative, which is what the parallel enumerations rely on.
class LogSumAccumulator {
 public:
  void add(double log_term);
  void merge(const LogSumAccumulator& other);
  /// ln of the accumulated sum; -inf when nothing (or only zeros) was added.
  double log_total() const;
  bool empty() const { return count_ == 0; }
  std::uint64_t count() const { return count_; }

 private:
  double max_ = -std::numeric_limits<double>::infinity();
  double sum_ = 0.0;    // sum of exp(term - max_), compensated
  double carry_ = 0.0;  // Kahan carry for sum_
  std::uint64_t count_ = 0;
};

}  // namespace permlab
