#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "permlab/linalg.hpp"

namespace permlab {

/// Basis element of the margin-zero space: +1 at (rho, sigma) and (m-1, m-1),
/// -1 at (rho, m-1) and (m-1, sigma). Indices are 0-based, rho, sigma < m-1.
DenseMatrix margin_zero_basis(std::size_t rho, std::size_t sigma, std::size_t m);

/// sum z_{r,s}^2 / t_{r,s}; t must be strictly positive.
double weighted_quadratic_form(const DenseMatrix& t, const DenseMatrix& z);

/// (m-1)^2 x (m-1)^2 Gram matrix of the quadratic form restricted to the
/// margin-zero basis, assembled by polarization. Pair (rho, sigma) maps to
/// index rho*(m-1)+sigma. Requires m >= 2.
DenseMatrix gram_matrix(const DenseMatrix& t);

/// 2m x 2m covariance of the row-sum / negated-column-sum vector:
/// [[I, -t], [-t^T, I]].
DenseMatrix covariance_matrix(const DenseMatrix& t);

/// (2m-1) x (2m-1) block matrix [[I_m, U], [U^T, I_{m-1}]], U = t minus its
/// last column.
DenseMatrix precision_block(const DenseMatrix& t);

/// Adjugate from the cofactor definition (each minor by LU). Fine at the
/// 2m x 2m sizes this project meets.
DenseMatrix adjugate(const DenseMatrix& a);

/// c = (1/m) * prod_{r>=2} (1 - lambda_r), lambda_r the eigenvalues of t t^T.
double adjugate_constant(const DenseMatrix& t);

struct SpectrumPairingReport {
  std::vector<double> covariance_eigenvalues;  // descending
  std::vector<double> paired_eigenvalues;      // {1 +/- sqrt(lambda_r)}, descending
  double max_gap = 0.0;
  bool pass = false;
};

/// The covariance spectrum must be {1 + sqrt(lambda_r)} union
/// {1 - sqrt(lambda_r)} as multisets (sorted comparison within tol).
SpectrumPairingReport spectrum_pairing_check(const DenseMatrix& t, double tol = 1e-8);

struct IdentityCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double rel_error = 0.0;
  bool pass = false;
};

struct DeterminantIdentityReport {
  std::vector<IdentityCheck> checks;
  double max_rel_error = 0.0;
  bool pass = false;
  std::string to_json() const;
};

/// Numerically verifies the chain of determinant identities connecting the
/// Gram-matrix Gaussian integral to det(I + J - t^T t):
///   1. gaussian_prefactor:  1/sqrt(m * prod t * det Gram) = 1/sqrt(det(I+J-t^T t))
///   2. schur_complement:    det(Gram^{-1}) = prod t / det(precision block)
///   3. adjugate_cofactor:   det(precision block) = c
///   4. matrix_determinant:  2 prod_{r>=2}(1-lambda_r) = chi^T adj(K) chi
/// t must be strictly positive and doubly stochastic.
DeterminantIdentityReport verify_determinant_identities(const DenseMatrix& t, double tol);

/// The full fluctuation apparatus in one bundle.
struct FluctuationModel {
  std::size_t m = 0;
  DenseMatrix t{1, 1};
  std::vector<DenseMatrix> basis;   // row-major (rho, sigma) order
  DenseMatrix gram{1, 1};           // identity-sized placeholder when m == 1
  DenseMatrix precision{1, 1};
  DenseMatrix covariance{1, 1};
  std::vector<double> lambdas;      // eigenvalues of t t^T, descending
  double c = 0.0;
  std::vector<double> chi;          // normalized all-ones, length 2m
};

FluctuationModel build_fluctuation_model(const DenseMatrix& t);

}  // namespace permlab
