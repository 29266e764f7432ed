#include "permlab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "compensated.hpp"
#include "permlab/errors.hpp"

namespace permlab {

namespace {

using detail::dd_add;
using detail::TwoDouble;

constexpr double kPi = 3.14159265358979323846;

void require(bool ok, const char* what) {
  if (!ok) throw DimensionError(what);
}

}  // namespace

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {
  if (rows == 0 || cols == 0) throw DimensionError("DenseMatrix: zero dimension");
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (rows == 0 || cols == 0) throw DimensionError("DenseMatrix: zero dimension");
  if (data_.size() != rows * cols) throw DimensionError("DenseMatrix: entry count mismatch");
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::constant(std::size_t rows, std::size_t cols, double value) {
  DenseMatrix m(rows, cols);
  std::fill(m.data_.begin(), m.data_.end(), value);
  return m;
}

DenseMatrix DenseMatrix::uniform_projection(std::size_t n) {
  return constant(n, n, 1.0 / static_cast<double>(n));
}

bool DenseMatrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double x) { return std::isfinite(x); });
}

double DenseMatrix::max_abs() const {
  double m = 0.0;
  for (double x : data_) m = std::max(m, std::abs(x));
  return m;
}

DenseMatrix DenseMatrix::transpose() const {
  DenseMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

DenseMatrix DenseMatrix::operator*(const DenseMatrix& rhs) const {
  require(cols_ == rhs.rows_, "matrix product: inner dimensions differ");
  DenseMatrix out(rows_, rhs.cols_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t k = 0; k < cols_; ++k) {
      double a = (*this)(r, k);
      if (a == 0.0) continue;
      for (std::size_t c = 0; c < rhs.cols_; ++c) out(r, c) += a * rhs(k, c);
    }
  }
  return out;
}

DenseMatrix DenseMatrix::operator+(const DenseMatrix& rhs) const {
  require(rows_ == rhs.rows_ && cols_ == rhs.cols_, "matrix sum: shape mismatch");
  DenseMatrix out = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] += rhs.data_[i];
  return out;
}

DenseMatrix DenseMatrix::operator-(const DenseMatrix& rhs) const {
  require(rows_ == rhs.rows_ && cols_ == rhs.cols_, "matrix difference: shape mismatch");
  DenseMatrix out = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] -= rhs.data_[i];
  return out;
}

LogNonneg LogNonneg::from_log(double log_value) {
  if (std::isnan(log_value) || log_value == std::numeric_limits<double>::infinity())
    throw DomainError("LogNonneg: log value must be in [-inf, +inf)");
  LogNonneg v;
  v.log_ = log_value;
  return v;
}

LogNonneg LogNonneg::from_value(double value) {
  if (!(value >= 0.0)) throw DomainError("LogNonneg: negative value");
  return value == 0.0 ? zero() : from_log(std::log(value));
}

double LogNonneg::value() const { return std::exp(log_); }

double lu_determinant(const DenseMatrix& m) {
  if (!m.square()) throw DimensionError("lu_determinant: matrix not square");
  if (!m.all_finite()) throw DomainError("lu_determinant: nonfinite entry");
  const std::size_t n = m.rows();
  std::vector<double> a(m.data().begin(), m.data().end());
  auto at = [&](std::size_t r, std::size_t c) -> double& { return a[r * n + c]; };

  double det = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot = k;
    double best = std::abs(at(k, k));
    for (std::size_t r = k + 1; r < n; ++r) {
      double v = std::abs(at(r, k));
      if (v > best) {
        best = v;
        pivot = r;
      }
    }
    if (best == 0.0) return 0.0;
    if (pivot != k) {
      for (std::size_t c = k; c < n; ++c) std::swap(at(pivot, c), at(k, c));
      det = -det;
    }
    det *= at(k, k);
    for (std::size_t r = k + 1; r < n; ++r) {
      double f = at(r, k) / at(k, k);
      if (f == 0.0) continue;
      for (std::size_t c = k + 1; c < n; ++c) at(r, c) -= f * at(k, c);
    }
  }
  return det;
}

EigenDecomposition symmetric_eigen(const DenseMatrix& m, double symmetry_tol) {
  if (!m.square()) throw DimensionError("symmetric_eigen: matrix not square");
  if (!m.all_finite()) throw DomainError("symmetric_eigen: nonfinite entry");
  const std::size_t n = m.rows();
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = r + 1; c < n; ++c)
      if (std::abs(m(r, c) - m(c, r)) > symmetry_tol)
        throw SymmetryError("symmetric_eigen: asymmetry beyond tolerance");

  // Work on the symmetrized copy; cyclic Jacobi rotations.
  DenseMatrix a(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) a(r, c) = 0.5 * (m(r, c) + m(c, r));
  DenseMatrix v = DenseMatrix::identity(n);

  double norm = 0.0;
  for (double x : a.data()) norm += x * x;
  norm = std::sqrt(norm);
  const double stop = std::max(norm, 1.0) * 1e-15;

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += 2.0 * a(p, q) * a(p, q);
    if (std::sqrt(off) <= stop) break;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double apq = a(p, q);
        if (std::abs(apq) <= stop / (n * n)) continue;
        double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        double t = (theta >= 0.0 ? 1.0 : -1.0) /
                   (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });

  EigenDecomposition out{std::vector<double>(n), DenseMatrix(n, n)};
  for (std::size_t i = 0; i < n; ++i) {
    out.values[i] = a(order[i], order[i]);
    for (std::size_t k = 0; k < n; ++k) out.vectors(k, i) = v(k, order[i]);
  }
  return out;
}

std::vector<double> symmetric_eigenvalues(const DenseMatrix& m, double symmetry_tol) {
  return symmetric_eigen(m, symmetry_tol).values;
}

namespace {

const std::vector<double>& log_factorial_table() {
  static const std::vector<double> table = [] {
    constexpr std::size_t kMax = 1000000;
    std::vector<double> t(kMax + 1);
    t[0] = 0.0;
    TwoDouble acc{0.0, 0.0};
    for (std::size_t k = 1; k <= kMax; ++k) {
      acc = dd_add(acc, std::log(static_cast<double>(k)));
      t[k] = acc.hi + acc.lo;
    }
    return t;
  }();
  return table;
}

}  // namespace

double log_factorial(std::uint64_t k) {
  const auto& table = log_factorial_table();
  if (k < table.size()) return table[k];
  // Stirling series; at k > 10^6 the truncated tail is below double resolution.
  double n = static_cast<double>(k);
  return n * std::log(n) - n + 0.5 * std::log(2.0 * kPi * n) + 1.0 / (12.0 * n) -
         1.0 / (360.0 * n * n * n);
}

double log_sum_exp(std::span<const double> terms) {
  if (terms.empty()) throw DomainError("log_sum_exp: empty term list");
  double m = -std::numeric_limits<double>::infinity();
  for (double t : terms) {
    if (std::isnan(t) || t == std::numeric_limits<double>::infinity())
      throw DomainError("log_sum_exp: term must be in [-inf, +inf)");
    m = std::max(m, t);
  }
  if (m == -std::numeric_limits<double>::infinity()) return m;  // all exact zeros
  double sum = 0.0, carry = 0.0;
  for (double t : terms) {
    double x = std::exp(t - m) - carry;
    double s = sum + x;
    carry = (s - sum) - x;
    sum = s;
  }
  return m + std::log(sum);
}

void LogSumAccumulator::add(double log_term) {
  if (std::isnan(log_term) || log_term == std::numeric_limits<double>::infinity())
    throw DomainError("LogSumAccumulator: term must be in [-inf, +inf)");
  ++count_;
  if (log_term == -std::numeric_limits<double>::infinity()) return;
  if (max_ == -std::numeric_limits<double>::infinity()) {
    max_ = log_term;
    sum_ = 1.0;
    carry_ = 0.0;
    return;
  }
  double x;
  if (log_term > max_) {
    double scale = std::exp(max_ - log_term);
    sum_ *= scale;
    carry_ *= scale;
    max_ = log_term;
    x = 1.0;
  } else {
    x = std::exp(log_term - max_);
  }
  double y = x - carry_;
  double s = sum_ + y;
  carry_ = (s - sum_) - y;
  sum_ = s;
}

void LogSumAccumulator::merge(const LogSumAccumulator& other) {
  count_ += other.count_;
  if (other.max_ == -std::numeric_limits<double>::infinity()) return;
  if (max_ == -std::numeric_limits<double>::infinity()) {
    max_ = other.max_;
    sum_ = other.sum_;
    carry_ = other.carry_;
    return;
  }
  double m = std::max(max_, other.max_);
  double a = std::exp(max_ - m) * (sum_ + carry_);
  double b = std::exp(other.max_ - m) * (other.sum_ + other.carry_);
  max_ = m;
  sum_ = a + b;
  carry_ = 0.0;
}

double LogSumAccumulator::log_total() const {
  if (max_ == -std::numeric_limits<double>::infinity()) return max_;
  return max_ + std::log(sum_ + carry_);
}

}  // namespace permlab
