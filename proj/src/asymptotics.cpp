#include "permlab/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "permlab/errors.hpp"
#include "permlab/format.hpp"

namespace permlab {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kDegenerateDet = 1e-12;

void check_square_positive(const DenseMatrix& x, const char* who) {
  if (!x.square()) throw DimensionError(std::string(who) + ": matrix not square");
  for (double e : x.data())
    if (!std::isfinite(e) || e <= 0.0)
      throw DomainError(std::string(who) + ": entries must be finite and positive");
}

}  // namespace

double fluctuation_determinant(const DenseMatrix& t) {
  if (!t.square()) throw DimensionError("fluctuation_determinant: matrix not square");
  if (!t.all_finite()) throw DomainError("fluctuation_determinant: nonfinite entry");
  const double residual = doubly_stochastic_residual(t);
  if (residual > 1e-8)
    throw InputError("fluctuation_determinant: matrix not doubly stochastic (residual " +
                     fmt_g17(residual) + ")");
  const std::size_t m = t.rows();
  DenseMatrix f = DenseMatrix::identity(m) + DenseMatrix::uniform_projection(m) -
                  t.transpose() * t;
  return lu_determinant(f);
}

AsymptoticPrediction predict_ratio(std::size_t n, const ScalingSolution& sol) {
  if (n < 1) throw DomainError("predict_ratio: n must be >= 1");
  const std::size_t m = sol.v.size();
  if (m == 0 || sol.w.size() != m || sol.t.rows() != m || !sol.t.square())
    throw DimensionError("predict_ratio: inconsistent scaling solution");

  double log_vw = 0.0;
  for (double x : sol.v) log_vw += std::log(x);
  for (double x : sol.w) log_vw += std::log(x);

  AsymptoticPrediction out;
  const double nd = static_cast<double>(n);
  out.log_leading = -static_cast<double>(m) * nd * std::log(static_cast<double>(m)) -
                    nd * log_vw;
  out.fluct_det = fluctuation_determinant(sol.t);
  if (out.fluct_det <= kDegenerateDet)
    throw DegenerateSpectrumError(
        "predict_ratio: fluctuation determinant vanished (spectral-gap collapse)",
        out.fluct_det);
  out.log_predicted_ratio = out.log_leading - 0.5 * std::log(out.fluct_det);
  return out;
}

AsymptoticPrediction predict_ratio(const PositiveBlockMatrix& b, std::size_t n,
                                   const ScalingSolution& sol) {
  const std::size_t m = b.size();
  if (sol.v.size() != m || sol.w.size() != m || sol.t.rows() != m)
    throw DimensionError("predict_ratio: solution size does not match seed");
  double gap = 0.0;
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t s = 0; s < m; ++s)
      gap = std::max(gap, std::abs(sol.t(r, s) - b(r, s) * sol.v[r] * sol.w[s]));
  if (gap > 1e-8)
    throw InputError("predict_ratio: scaling solution does not belong to this seed");
  return predict_ratio(n, sol);
}

double entropy_functional(const DenseMatrix& x) {
  check_square_positive(x, "entropy_functional");
  const double m = static_cast<double>(x.rows());
  double sum = 0.0;
  for (double e : x.data()) sum += e * std::log(e);
  return -m * std::log(m) - sum;
}

double prefactor_functional(const DenseMatrix& x) {
  check_square_positive(x, "prefactor_functional");
  const double m = static_cast<double>(x.rows());
  double log_prod = 0.0;
  for (double e : x.data()) log_prod += std::log(e);
  return std::exp(-0.5 * (std::log(m) + log_prod));
}

double cost_functional(const PositiveBlockMatrix& b, const DenseMatrix& x) {
  if (x.rows() != b.size() || !x.square())
    throw DimensionError("cost_functional: shape mismatch");
  check_square_positive(x, "cost_functional");
  double sum = 0.0;
  for (std::size_t r = 0; r < b.size(); ++r)
    for (std::size_t s = 0; s < b.size(); ++s) sum += x(r, s) * std::log(b(r, s));
  return sum;
}

double occupancy_ratio_asymptotic(const ContingencyTable& q) {
  const std::size_t m = q.m();
  const double n = static_cast<double>(q.n());
  DenseMatrix x(m, m);
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t s = 0; s < m; ++s) {
      if (q(r, s) < 1)
        throw DomainError("occupancy_ratio_asymptotic: every entry must be >= 1");
      x(r, s) = static_cast<double>(q(r, s)) / n;
    }
  const double corner = static_cast<double>((m - 1) * (m - 1)) / 2.0;
  return n * entropy_functional(x) + std::log(prefactor_functional(x)) -
         corner * std::log(2.0 * kPi * n);
}

std::string SweepReport::to_csv() const {
  std::ostringstream out;
  out << "n,log_exact_ratio,log_predicted_ratio,scaled_error,sqrt_n_times_error\n";
  for (const auto& r : rows) {
    out << r.n << ',' << fmt_g17(r.log_exact_ratio) << ',' << fmt_g17(r.log_predicted_ratio)
        << ',' << fmt_g17(r.scaled_error) << ',' << fmt_g17(r.sqrt_n_times_error) << '\n';
  }
  return out.str();
}

std::string SweepReport::to_json() const {
  std::ostringstream out;
  out << "{\"rows\":[";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (i) out << ',';
    out << "{\"n\":" << r.n << ",\"log_exact_ratio\":" << fmt_g17(r.log_exact_ratio)
        << ",\"log_predicted_ratio\":" << fmt_g17(r.log_predicted_ratio)
        << ",\"scaled_error\":" << fmt_g17(r.scaled_error)
        << ",\"sqrt_n_times_error\":" << fmt_g17(r.sqrt_n_times_error) << '}';
  }
  out << "]}";
  return out.str();
}

SweepReport verify_sweep(const PositiveBlockMatrix& b, std::span<const std::size_t> ns,
                         RatioOptions options) {
  const ScalingSolution sol = sinkhorn_scale(b);
  SweepReport report;
  report.rows.reserve(ns.size());
  for (std::size_t n : ns) {
    const BlockPermanentResult exact = block_permanent_ratio(b, n, options);
    const AsymptoticPrediction pred = predict_ratio(b, n, sol);
    SweepRow row;
    row.n = n;
    row.log_exact_ratio = exact.log_ratio;
    row.log_predicted_ratio = pred.log_predicted_ratio;
    row.scaled_error = std::abs(std::expm1(exact.log_ratio - pred.log_predicted_ratio));
    row.sqrt_n_times_error = std::sqrt(static_cast<double>(n)) * row.scaled_error;
    report.rows.push_back(row);
  }
  std::sort(report.rows.begin(), report.rows.end(),
            [](const SweepRow& a, const SweepRow& b2) { return a.n < b2.n; });
  return report;
}

}  // namespace permlab
