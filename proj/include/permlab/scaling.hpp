#pragma once

#include <cstddef>
#include <vector>

#include "permlab/linalg.hpp"

namespace permlab {

/// The m x m seed matrix of block weights. Strict positivity is the
/// hypothesis of the whole asymptotic analysis and is enforced here;
/// degenerate (zero-entry) studies go through the enumeration path, which
/// takes raw matrices.
class PositiveBlockMatrix {
 public:
  explicit PositiveBlockMatrix(DenseMatrix entries);

  std::size_t size() const { return entries_.rows(); }  // m
  double operator()(std::size_t r, std::size_t s) const { return entries_(r, s); }
  const DenseMatrix& entries() const { return entries_; }

 private:
  DenseMatrix entries_;
};

/// Result of the matrix-scaling problem: diag(v) * B * diag(w) = t doubly
/// stochastic, gauge-fixed so prod(v) = prod(w).
struct ScalingSolution {
  std::vector<double> v;
  std::vector<double> w;
  DenseMatrix t{1, 1};
  double residual = 0.0;      // max |row or column sum of t - 1|
  std::size_t iterations = 0;
};

struct SinkhornOptions {
  double tol = 1e-12;
  std::size_t max_iter = 100000;
};

/// Alternating row/column normalization from v = w = (1,...,1), row first,
/// until every row and column sum of t is within tol of 1, then one
/// multiplicative gauge correction. Convergence is guaranteed for strictly
/// positive B; exceeding max_iter raises ConvergenceError with the last
/// residual.
ScalingSolution sinkhorn_scale(const PositiveBlockMatrix& b, SinkhornOptions options = {});

/// Raw-matrix variant (kernel discretizations); entries must be strictly
/// positive.
ScalingSolution sinkhorn_scale(const DenseMatrix& positive, SinkhornOptions options = {});

/// max over all rows and columns of |sum - 1|.
double doubly_stochastic_residual(const DenseMatrix& t);

}  // namespace permlab
