#include "permlab/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "permlab/asymptotics.hpp"
#include "permlab/errors.hpp"
#include "permlab/format.hpp"
#include "permlab/permanent.hpp"

namespace permlab {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kFlagTol = 1e-12;

// Block index (0-based) of x in [0, 1] split into m half-open blocks
// ((r-1)/m, r/m]. Values within 1e-12 of a boundary snap to it, so block
// grids at N = m*n reproduce the integer ceiling exactly.
std::size_t block_index(double x, std::size_t m) {
  const double y = x * static_cast<double>(m);
  const double k = std::nearbyint(y);
  double up = (std::abs(y - k) <= 1e-12) ? k : std::ceil(y);
  up = std::min(std::max(up, 1.0), static_cast<double>(m));
  return static_cast<std::size_t>(up) - 1;
}

double bilinear(const DenseMatrix& samples, double x, double y) {
  const std::size_t n = samples.rows();
  if (n == 1) return samples(0, 0);
  const double nd = static_cast<double>(n);
  auto locate = [&](double coord, std::size_t& lo, double& frac) {
    double u = std::min(std::max(coord * nd, 1.0), nd);  // node i sits at u = i
    lo = static_cast<std::size_t>(std::min(std::floor(u), nd - 1.0));
    frac = u - static_cast<double>(lo);
  };
  std::size_t i0, j0;
  double fx, fy;
  locate(x, i0, fx);
  locate(y, j0, fy);
  const double a = samples(i0 - 1, j0 - 1), b = samples(i0, j0 - 1);
  const double c = samples(i0 - 1, j0), d = samples(i0, j0);
  return (1.0 - fx) * (1.0 - fy) * a + fx * (1.0 - fy) * b + (1.0 - fx) * fy * c +
         fx * fy * d;
}

}  // namespace

KernelSpec::KernelSpec(Family family, double eps, double sigma, DenseMatrix data)
    : family_(family), eps_(eps), sigma_(sigma), data_(std::move(data)) {
  detect_and_validate_flags();
}

KernelSpec KernelSpec::zero() { return KernelSpec(Family::Zero, 0.0, 0.0, DenseMatrix(1, 1)); }

KernelSpec KernelSpec::cosine(double eps) {
  if (!std::isfinite(eps)) throw DomainError("KernelSpec::cosine: eps must be finite");
  return KernelSpec(Family::Cosine, eps, 0.0, DenseMatrix(1, 1));
}

KernelSpec KernelSpec::gaussian_bump(double eps, double sigma) {
  if (!std::isfinite(eps) || !(sigma > 0.0))
    throw DomainError("KernelSpec::gaussian_bump: need finite eps and sigma > 0");
  return KernelSpec(Family::GaussianBump, eps, sigma, DenseMatrix(1, 1));
}

KernelSpec KernelSpec::block(PositiveBlockMatrix b) {
  return KernelSpec(Family::Block, 0.0, 0.0, b.entries());
}

KernelSpec KernelSpec::grid(DenseMatrix samples) {
  if (!samples.square()) throw DimensionError("KernelSpec::grid: samples not square");
  if (!samples.all_finite()) throw DomainError("KernelSpec::grid: nonfinite sample");
  return KernelSpec(Family::Grid, 0.0, 0.0, std::move(samples));
}

KernelSpec KernelSpec::grid_from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("KernelSpec: cannot open grid file " + path);
  return grid_from_stream(in);
}

KernelSpec KernelSpec::grid_from_stream(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InputError("KernelSpec: empty grid file");
  std::size_t n = 0;
  try {
    n = static_cast<std::size_t>(std::stoul(line));
  } catch (const std::exception&) {
    throw InputError("KernelSpec: grid file must start with its size");
  }
  if (n < 1) throw InputError("KernelSpec: grid size must be >= 1");
  DenseMatrix samples(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::getline(in, line)) throw InputError("KernelSpec: truncated grid file");
    std::stringstream row(line);
    std::string cell;
    for (std::size_t j = 0; j < n; ++j) {
      if (!std::getline(row, cell, ','))
        throw InputError("KernelSpec: short row in grid file");
      try {
        samples(i, j) = std::stod(cell);
      } catch (const std::exception&) {
        throw InputError("KernelSpec: bad number in grid file");
      }
    }
  }
  return grid(std::move(samples));
}

double KernelSpec::operator()(double x, double y) const {
  switch (family_) {
    case Family::Zero:
      return 0.0;
    case Family::Cosine:
      return eps_ * std::cos(2.0 * kPi * (x - y));
    case Family::GaussianBump: {
      const double d = x - y;
      return eps_ * std::exp(-d * d / (2.0 * sigma_ * sigma_));
    }
    case Family::Block:
      return -std::log(data_(block_index(x, data_.rows()), block_index(y, data_.rows())));
    case Family::Grid:
      return bilinear(data_, x, y);
  }
  return 0.0;
}

std::size_t KernelSpec::block_count() const {
  return family_ == Family::Block ? data_.rows() : 0;
}

void KernelSpec::detect_and_validate_flags() {
  std::mt19937 rng(20240514u);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double sym = 0.0, anti = 0.0, diag = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double x = unif(rng), y = unif(rng);
    const double v = (*this)(x, y);
    sym = std::max(sym, std::abs(v - (*this)(y, x)));
    anti = std::max(anti, std::abs(v - (*this)(1.0 - x, 1.0 - y)));
    diag = std::max(diag, std::abs((*this)(x, x)));
  }
  symmetric_ = sym <= kFlagTol;
  antipodal_ = anti <= kFlagTol;
  zero_diagonal_ = diag <= kFlagTol;
}

DenseMatrix discretize_kernel(const KernelSpec& c, std::size_t n) {
  if (n < 1) throw DomainError("discretize_kernel: n must be >= 1");
  const double nd = static_cast<double>(n);
  DenseMatrix a(n, n);
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = 1; j <= n; ++j)
      a(i - 1, j - 1) = std::exp(-c(static_cast<double>(i) / nd, static_cast<double>(j) / nd));
  return a;
}

BridgeSolution bridge_potentials(const KernelSpec& c, std::size_t n, BridgeOptions options) {
  const DenseMatrix a = discretize_kernel(c, n);
  const ScalingSolution scal = sinkhorn_scale(a, SinkhornOptions{options.tol, options.max_iter});

  BridgeSolution sol;
  sol.grid = n;
  sol.alpha.resize(n);
  sol.beta.resize(n);
  const double half_log_n = 0.5 * std::log(static_cast<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    sol.alpha[i] = -std::log(scal.v[i]) - half_log_n;
    sol.beta[i] = -std::log(scal.w[i]) - half_log_n;
  }
  sol.rho = DenseMatrix(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      sol.rho(i, j) = static_cast<double>(n) * scal.t(i, j);
  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) mean += sol.alpha[i] + sol.beta[i];
  sol.lambda_rate = mean / static_cast<double>(n);
  sol.residual = scal.residual;
  sol.iterations = scal.iterations;
  return sol;
}

double fredholm_determinant(const BridgeSolution& sol) {
  const std::size_t n = sol.grid;
  if (n < 1 || sol.rho.rows() != n || !sol.rho.square())
    throw DimensionError("fredholm_determinant: inconsistent bridge solution");
  if (sol.residual > 1e-10)
    throw InputError("fredholm_determinant: bridge residual too large (" +
                     fmt_g17(sol.residual) + ")");
  DenseMatrix t(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) t(i, j) = sol.rho(i, j) / static_cast<double>(n);
  const double det = lu_determinant(DenseMatrix::identity(n) +
                                    DenseMatrix::uniform_projection(n) - t.transpose() * t);
  if (det <= 1e-12)
    throw DegenerateSpectrumError("fredholm_determinant: determinant vanished", det);
  return det;
}

std::string KernelTrendReport::to_csv() const {
  std::ostringstream out;
  out << "n,log_exact_ratio,lambda_lattice,lambda_continuum,fredholm_det,"
         "log_predicted_ratio,scaled_error,sqrt_n_times_error\n";
  for (const auto& r : rows) {
    out << r.n << ',' << fmt_g17(r.log_exact_ratio) << ',' << fmt_g17(r.lambda_lattice) << ','
        << fmt_g17(r.lambda_continuum) << ',' << fmt_g17(r.fredholm_det) << ','
        << fmt_g17(r.log_predicted_ratio) << ',' << fmt_g17(r.scaled_error) << ','
        << fmt_g17(r.sqrt_n_times_error) << '\n';
  }
  return out.str();
}

std::string KernelTrendReport::to_json() const {
  std::ostringstream out;
  out << "{\"refined_grid\":" << refined_grid << ",\"rows\":[";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (i) out << ',';
    out << "{\"n\":" << r.n << ",\"log_exact_ratio\":" << fmt_g17(r.log_exact_ratio)
        << ",\"lambda_lattice\":" << fmt_g17(r.lambda_lattice)
        << ",\"lambda_continuum\":" << fmt_g17(r.lambda_continuum)
        << ",\"fredholm_det\":" << fmt_g17(r.fredholm_det)
        << ",\"log_predicted_ratio\":" << fmt_g17(r.log_predicted_ratio)
        << ",\"scaled_error\":" << fmt_g17(r.scaled_error)
        << ",\"sqrt_n_times_error\":" << fmt_g17(r.sqrt_n_times_error) << '}';
  }
  out << "]}";
  return out.str();
}

KernelTrendReport asymptotic_trend(const KernelSpec& c, std::span<const std::size_t> ns,
                                   TrendOptions options) {
  for (std::size_t n : ns)
    if (n < 1 || n > 26)
      throw SizeError("asymptotic_trend: exact side needs 1 <= n <= 26");

  const BridgeSolution refined = bridge_potentials(c, options.refined_grid, options.bridge);
  const double det = fredholm_determinant(refined);

  KernelTrendReport report;
  report.refined_grid = options.refined_grid;
  for (std::size_t n : ns) {
    const DenseMatrix a = discretize_kernel(c, n);
    const LogNonneg perm = permanent_ryser(a, RyserOptions{26, options.ryser_workers});
    const BridgeSolution lattice = bridge_potentials(c, n, options.bridge);

    KernelTrendRow row;
    row.n = n;
    row.log_exact_ratio = perm.log() - log_factorial(n);
    row.lambda_lattice = lattice.lambda_rate;
    row.lambda_continuum = refined.lambda_rate;
    row.fredholm_det = det;
    row.log_predicted_ratio =
        static_cast<double>(n) * row.lambda_lattice - 0.5 * std::log(det);
    row.scaled_error = std::abs(std::expm1(row.log_exact_ratio - row.log_predicted_ratio));
    row.sqrt_n_times_error = std::sqrt(static_cast<double>(n)) * row.scaled_error;
    report.rows.push_back(row);
  }
  std::sort(report.rows.begin(), report.rows.end(),
            [](const KernelTrendRow& a, const KernelTrendRow& b) { return a.n < b.n; });
  return report;
}

}  // namespace permlab
