#pragma once

// Test-only oracles, deliberately independent of the library's own numeric
// paths: cofactor determinants, characteristic-polynomial eigenvalues,
// extended-precision sums, integer rank. Slow and simple on purpose.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "permlab/linalg.hpp"

namespace oracle {

/// Recursive cofactor expansion along the first row.
inline double cofactor_determinant(const permlab::DenseMatrix& m) {
  const std::size_t n = m.rows();
  if (n == 1) return m(0, 0);
  double det = 0.0;
  permlab::DenseMatrix minor(n - 1, n - 1);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t r = 1; r < n; ++r) {
      std::size_t mc = 0;
      for (std::size_t c = 0; c < n; ++c) {
        if (c == j) continue;
        minor(r - 1, mc++) = m(r, c);
      }
    }
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    det += sign * m(0, j) * cofactor_determinant(minor);
  }
  return det;
}

/// Coefficients of det(xI - M) by the Faddeev-LeVerrier recurrence
/// (c[0] = 1 leading), entirely trace-based.
inline std::vector<double> characteristic_polynomial(const permlab::DenseMatrix& m) {
  const std::size_t n = m.rows();
  std::vector<double> c(n + 1, 0.0);
  c[0] = 1.0;
  permlab::DenseMatrix power = m;  // M * (running adjusted power)
  for (std::size_t k = 1; k <= n; ++k) {
    double trace = 0.0;
    for (std::size_t i = 0; i < n; ++i) trace += power(i, i);
    c[k] = -trace / static_cast<double>(k);
    if (k == n) break;
    for (std::size_t i = 0; i < n; ++i) power(i, i) += c[k];
    power = m * power;
  }
  return c;
}

inline double eval_poly(std::span<const double> c, double x) {
  double v = 0.0;
  for (double ck : c) v = v * x + ck;
  return v;
}

/// All real roots of the characteristic polynomial of a symmetric matrix,
/// descending, found by sign-change bracketing inside the Gershgorin bound
/// plus bisection. Assumes distinct roots (random-matrix tests).
inline std::vector<double> charpoly_eigenvalues(const permlab::DenseMatrix& m) {
  const std::size_t n = m.rows();
  const std::vector<double> c = characteristic_polynomial(m);
  double radius = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    double row = 0.0;
    for (std::size_t s = 0; s < n; ++s) row += std::abs(m(r, s));
    radius = std::max(radius, row);
  }
  radius += 1.0;

  const int grid = 20000;
  std::vector<double> roots;
  double prev_x = -radius, prev_v = eval_poly(c, prev_x);
  for (int i = 1; i <= grid && roots.size() < n; ++i) {
    double x = -radius + 2.0 * radius * i / grid;
    double v = eval_poly(c, x);
    if (prev_v == 0.0) roots.push_back(prev_x);
    if ((prev_v < 0.0 && v > 0.0) || (prev_v > 0.0 && v < 0.0)) {
      double lo = prev_x, hi = x, vlo = prev_v;
      for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        double vm = eval_poly(c, mid);
        if ((vlo < 0.0) == (vm < 0.0)) {
          lo = mid;
          vlo = vm;
        } else {
          hi = mid;
        }
      }
      roots.push_back(0.5 * (lo + hi));
    }
    prev_x = x;
    prev_v = v;
  }
  std::sort(roots.rbegin(), roots.rend());
  return roots;
}

/// ln(sum exp(t_i)) accumulated in double-double precision after the shift.
inline double log_sum_exp_dd(std::span<const double> terms) {
  double m = -std::numeric_limits<double>::infinity();
  for (double t : terms) m = std::max(m, t);
  if (m == -std::numeric_limits<double>::infinity()) return m;
  double hi = 0.0, lo = 0.0;
  for (double t : terms) {
    double x = std::exp(t - m);
    double s = hi + x;
    double bb = s - hi;
    double err = (hi - (s - bb)) + (x - bb);
    hi = s;
    lo += err;
  }
  return m + std::log(hi + lo);
}

/// Rank of a small integer matrix by fraction-free elimination on doubles.
inline std::size_t rank(std::vector<std::vector<double>> rows) {
  const std::size_t nr = rows.size();
  std::size_t rank = 0;
  const std::size_t nc = nr == 0 ? 0 : rows[0].size();
  for (std::size_t c = 0; c < nc && rank < nr; ++c) {
    std::size_t pivot = rank;
    for (std::size_t r = rank; r < nr; ++r)
      if (std::abs(rows[r][c]) > std::abs(rows[pivot][c])) pivot = r;
    if (std::abs(rows[pivot][c]) < 1e-9) continue;
    std::swap(rows[pivot], rows[rank]);
    for (std::size_t r = rank + 1; r < nr; ++r) {
      double f = rows[r][c] / rows[rank][c];
      for (std::size_t cc = c; cc < nc; ++cc) rows[r][cc] -= f * rows[rank][cc];
    }
    ++rank;
  }
  return rank;
}

inline permlab::DenseMatrix random_matrix(std::size_t n, std::mt19937& rng, double lo = -1.0,
                                          double hi = 1.0) {
  std::uniform_real_distribution<double> unif(lo, hi);
  permlab::DenseMatrix m(n, n);
  for (auto& x : m.data()) x = unif(rng);
  return m;
}

inline permlab::DenseMatrix random_symmetric(std::size_t n, std::mt19937& rng) {
  permlab::DenseMatrix m = random_matrix(n, rng);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = r; c < n; ++c) {
      double v = 0.5 * (m(r, c) + m(c, r));
      m(r, c) = v;
      m(c, r) = v;
    }
  return m;
}

inline permlab::DenseMatrix random_positive(std::size_t n, std::mt19937& rng, double lo = 0.25,
                                            double hi = 4.0) {
  std::uniform_real_distribution<double> unif(std::log(lo), std::log(hi));
  permlab::DenseMatrix m(n, n);
  for (auto& x : m.data()) x = std::exp(unif(rng));
  return m;
}

}  // namespace oracle
