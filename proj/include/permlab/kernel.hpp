#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "permlab/linalg.hpp"
#include "permlab/scaling.hpp"

namespace permlab {

/// A cost kernel C(x, y) on the unit square, either a built-in parametric
/// family or a sampled grid with bilinear interpolation. Declared symmetry
/// flags are validated at 100 fixed-seed random points on construction.
class KernelSpec {
 public:
  enum class Family { Zero, Cosine, GaussianBump, Block, Grid };

  static KernelSpec zero();
  /// eps * cos(2 pi (x - y)).
  static KernelSpec cosine(double eps);
  /// eps * exp(-(x - y)^2 / (2 sigma^2)).
  static KernelSpec gaussian_bump(double eps, double sigma);
  /// Piecewise constant: C = -ln b on each block, so exp(-C) reproduces b.
  static KernelSpec block(PositiveBlockMatrix b);
  /// Values of C at (i/N, j/N), i, j in 1..N; CSV format: first line N, then
  /// N rows of N comma-separated values.
  static KernelSpec grid(DenseMatrix samples);
  static KernelSpec grid_from_csv(const std::string& path);
  static KernelSpec grid_from_stream(std::istream& in);

  double operator()(double x, double y) const;

  Family family() const { return family_; }
  bool symmetric_in_arguments() const { return symmetric_; }
  bool antipodal() const { return antipodal_; }
  bool zero_diagonal() const { return zero_diagonal_; }
  /// For block kernels, the seed size; 0 otherwise.
  std::size_t block_count() const;

 private:
  KernelSpec(Family family, double eps, double sigma, DenseMatrix data);
  void detect_and_validate_flags();

  Family family_;
  double eps_ = 0.0;
  double sigma_ = 0.0;
  DenseMatrix data_{1, 1};  // block seed or grid samples
  bool symmetric_ = false;
  bool antipodal_ = false;
  bool zero_diagonal_ = false;
};

/// The N x N matrix with entries exp(-C(i/N, j/N)), i, j in 1..N.
DenseMatrix discretize_kernel(const KernelSpec& c, std::size_t n);

/// Discrete bridge: rho_{ij} = exp(-C_{ij} - alpha_i - beta_j) with unit row
/// and column means under the 1/N quadrature weight, gauge sum(alpha) =
/// sum(beta).
struct BridgeSolution {
  std::size_t grid = 0;
  std::vector<double> alpha;
  std::vector<double> beta;
  DenseMatrix rho{1, 1};
  double lambda_rate = 0.0;  // mean(alpha) + mean(beta)
  double residual = 0.0;     // max |row/col mean of rho - 1|
  std::size_t iterations = 0;
};

struct BridgeOptions {
  double tol = 1e-12;
  std::size_t max_iter = 100000;
};

BridgeSolution bridge_potentials(const KernelSpec& c, std::size_t n, BridgeOptions options = {});

/// Nystrom value of det(I + J - T*T) for the bridge operator: determinant of
/// delta_{ij} + 1/N - (1/N) [ (1/N) sum_k rho_{ki} rho_{kj} ].
/// Requires residual <= 1e-10; a value <= 1e-12 raises
/// DegenerateSpectrumError.
double fredholm_determinant(const BridgeSolution& sol);

struct KernelTrendRow {
  std::size_t n = 0;
  double log_exact_ratio = 0.0;     // ln(perm(A^{(n)}) / n!) via Ryser
  double lambda_lattice = 0.0;      // bridge rate at grid n
  double lambda_continuum = 0.0;    // bridge rate at the refined grid
  double fredholm_det = 0.0;        // at the refined grid
  double log_predicted_ratio = 0.0; // n * lambda_lattice - ln(fredholm)/2
  double scaled_error = 0.0;
  double sqrt_n_times_error = 0.0;
};

struct KernelTrendReport {
  std::size_t refined_grid = 0;
  std::vector<KernelTrendRow> rows;
  std::string to_csv() const;
  std::string to_json() const;
};

struct TrendOptions {
  std::size_t refined_grid = 256;
  BridgeOptions bridge = {};
  unsigned ryser_workers = 1;
};

/// Exact-vs-predicted comparison for a smooth kernel at small n (Ryser side
/// capped at n = 26). Both the per-n lattice rate and the refined-grid rate
/// are reported; the prediction column uses the lattice rate.
KernelTrendReport asymptotic_trend(const KernelSpec& c, std::span<const std::size_t> ns,
                                   TrendOptions options = {});

}  // namespace permlab
