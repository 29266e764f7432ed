#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "permlab/block_permanent.hpp"
#include "permlab/linalg.hpp"
#include "permlab/scaling.hpp"

namespace permlab {

/// The predicted normalized log permanent: leading exponential term plus the
/// Gaussian-correction determinant.
struct AsymptoticPrediction {
  double log_leading = 0.0;          // -mn ln m - n sum ln v - n sum ln w
  double fluct_det = 0.0;            // det(I + J - t^T t)
  double log_predicted_ratio = 0.0;  // log_leading - ln(fluct_det)/2
};

/// det(I + J - t^T t) for a doubly stochastic t (residual <= 1e-8 required).
double fluctuation_determinant(const DenseMatrix& t);

/// Prediction from an already computed scaling solution.
/// Throws DegenerateSpectrumError when the determinant is <= 1e-12 (the
/// prefactor collapses and the asymptotic form does not apply).
AsymptoticPrediction predict_ratio(std::size_t n, const ScalingSolution& sol);

/// Same, but checks that sol actually scales b.
AsymptoticPrediction predict_ratio(const PositiveBlockMatrix& b, std::size_t n,
                                   const ScalingSolution& sol);

/// -m ln m - sum x ln x, for strictly positive m x m input.
double entropy_functional(const DenseMatrix& x);

/// m^{-1/2} * (prod x)^{-1/2}.
double prefactor_functional(const DenseMatrix& x);

/// sum x_{r,s} ln b_{r,s}.
double cost_functional(const PositiveBlockMatrix& b, const DenseMatrix& x);

/// ln of the Laplace-form approximation of (occupancy count / (mn)!):
/// n*L[Q/n] + ln K[Q/n] - (m-1)^2/2 * ln(2 pi n). Diagnostic only; every
/// entry of q must be >= 1.
double occupancy_ratio_asymptotic(const ContingencyTable& q);

struct SweepRow {
  std::size_t n = 0;
  double log_exact_ratio = 0.0;
  double log_predicted_ratio = 0.0;
  double scaled_error = 0.0;       // |exp(log_exact - log_predicted) - 1|
  double sqrt_n_times_error = 0.0;
};

struct SweepReport {
  std::vector<SweepRow> rows;  // sorted by n
  std::string to_csv() const;
  std::string to_json() const;
};

/// Exact-vs-predicted comparison at each n. Budget errors from the exact
/// enumeration propagate.
SweepReport verify_sweep(const PositiveBlockMatrix& b, std::span<const std::size_t> ns,
                         RatioOptions options = {});

}  // namespace permlab
