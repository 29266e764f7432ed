#include "permlab/scaling.hpp"

#include <cmath>

#include "permlab/errors.hpp"

namespace permlab {

PositiveBlockMatrix::PositiveBlockMatrix(DenseMatrix entries) : entries_(std::move(entries)) {
  if (!entries_.square()) throw DimensionError("PositiveBlockMatrix: matrix not square");
  for (double x : entries_.data()) {
    if (!std::isfinite(x) || x <= 0.0)
      throw DomainError("PositiveBlockMatrix: entries must be finite and strictly positive");
  }
}

namespace {

DenseMatrix scaled_matrix(const DenseMatrix& b, const std::vector<double>& v,
                          const std::vector<double>& w) {
  const std::size_t m = b.rows();
  DenseMatrix t(m, m);
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t s = 0; s < m; ++s) t(r, s) = b(r, s) * v[r] * w[s];
  return t;
}

}  // namespace

namespace {

ScalingSolution sinkhorn_core(const DenseMatrix& b, SinkhornOptions options) {
  if (!(options.tol > 0.0)) throw DomainError("sinkhorn_scale: tol must be positive");
  if (options.max_iter < 1) throw DomainError("sinkhorn_scale: max_iter must be >= 1");

  const std::size_t m = b.rows();
  std::vector<double> v(m, 1.0), w(m, 1.0);
  double residual = 0.0;
  std::size_t iter = 0;
  // Stop slightly below tol so the later gauge rescale (a couple of ulps on
  // each entry) cannot push the reported residual back above it.
  const double stop = 0.5 * options.tol;

  for (; iter < options.max_iter; ++iter) {
    for (std::size_t r = 0; r < m; ++r) {
      double sum = 0.0;
      for (std::size_t s = 0; s < m; ++s) sum += b(r, s) * w[s];
      v[r] = 1.0 / sum;
    }
    for (std::size_t s = 0; s < m; ++s) {
      double sum = 0.0;
      for (std::size_t r = 0; r < m; ++r) sum += b(r, s) * v[r];
      w[s] = 1.0 / sum;
    }
    residual = doubly_stochastic_residual(scaled_matrix(b, v, w));
    if (residual <= stop) {
      ++iter;
      break;
    }
  }
  if (residual > stop)
    throw ConvergenceError("sinkhorn_scale: iteration limit reached", residual);

  // Gauge: prod(v) = prod(w), via (v, w) -> (cv, w/c).
  double log_c = 0.0;
  for (std::size_t r = 0; r < m; ++r) log_c += std::log(w[r]) - std::log(v[r]);
  log_c /= 2.0 * static_cast<double>(m);
  const double c = std::exp(log_c);
  for (std::size_t r = 0; r < m; ++r) {
    v[r] *= c;
    w[r] /= c;
  }

  ScalingSolution sol{std::move(v), std::move(w), DenseMatrix(m, m), 0.0, iter};
  sol.t = scaled_matrix(b, sol.v, sol.w);
  sol.residual = doubly_stochastic_residual(sol.t);
  return sol;
}

}  // namespace

ScalingSolution sinkhorn_scale(const PositiveBlockMatrix& b, SinkhornOptions options) {
  return sinkhorn_core(b.entries(), options);
}

ScalingSolution sinkhorn_scale(const DenseMatrix& positive, SinkhornOptions options) {
  if (!positive.square()) throw DimensionError("sinkhorn_scale: matrix not square");
  for (double x : positive.data())
    if (!std::isfinite(x) || x <= 0.0)
      throw DomainError("sinkhorn_scale: entries must be finite and strictly positive");
  return sinkhorn_core(positive, options);
}

double doubly_stochastic_residual(const DenseMatrix& t) {
  if (!t.square()) throw DimensionError("doubly_stochastic_residual: matrix not square");
  const std::size_t m = t.rows();
  double worst = 0.0;
  for (std::size_t r = 0; r < m; ++r) {
    double row = 0.0, col = 0.0;
    for (std::size_t s = 0; s < m; ++s) {
      row += t(r, s);
      col += t(s, r);
    }
    worst = std::max(worst, std::abs(row - 1.0));
    worst = std::max(worst, std::abs(col - 1.0));
  }
  return worst;
}

}  // namespace permlab
