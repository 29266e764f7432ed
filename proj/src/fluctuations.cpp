#include "permlab/fluctuations.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "permlab/errors.hpp"
#include "permlab/format.hpp"
#include "permlab/scaling.hpp"

namespace permlab {

namespace {

void check_stochastic(const DenseMatrix& t, const char* who, bool require_positive) {
  if (!t.square()) throw DimensionError(std::string(who) + ": matrix not square");
  if (!t.all_finite()) throw DomainError(std::string(who) + ": nonfinite entry");
  if (require_positive)
    for (double x : t.data())
      if (x <= 0.0) throw DomainError(std::string(who) + ": entries must be positive");
  if (doubly_stochastic_residual(t) > 1e-8)
    throw InputError(std::string(who) + ": matrix not doubly stochastic");
}

std::vector<double> stochastic_spectrum(const DenseMatrix& t) {
  std::vector<double> lambdas = symmetric_eigenvalues(t * t.transpose());
  for (double& l : lambdas) l = std::max(l, 0.0);  // clip eigensolver noise
  return lambdas;
}

IdentityCheck make_check(std::string name, double lhs, double rhs, double tol) {
  IdentityCheck c;
  c.name = std::move(name);
  c.lhs = lhs;
  c.rhs = rhs;
  const double scale = std::max(std::abs(lhs), std::abs(rhs));
  c.rel_error = scale == 0.0 ? 0.0 : std::abs(lhs - rhs) / scale;
  c.pass = c.rel_error <= tol;
  return c;
}

}  // namespace

DenseMatrix margin_zero_basis(std::size_t rho, std::size_t sigma, std::size_t m) {
  if (m < 2) throw DimensionError("margin_zero_basis: m must be >= 2");
  if (rho + 1 >= m || sigma + 1 >= m)
    throw DimensionError("margin_zero_basis: index out of range");
  DenseMatrix f(m, m);
  f(rho, sigma) = 1.0;
  f(rho, m - 1) = -1.0;
  f(m - 1, sigma) = -1.0;
  f(m - 1, m - 1) = 1.0;
  return f;
}

double weighted_quadratic_form(const DenseMatrix& t, const DenseMatrix& z) {
  if (!t.square() || z.rows() != t.rows() || z.cols() != t.cols())
    throw DimensionError("weighted_quadratic_form: shape mismatch");
  double sum = 0.0;
  for (std::size_t r = 0; r < t.rows(); ++r)
    for (std::size_t s = 0; s < t.cols(); ++s) {
      if (!(t(r, s) > 0.0))
        throw DomainError("weighted_quadratic_form: weights must be positive");
      sum += z(r, s) * z(r, s) / t(r, s);
    }
  return sum;
}

DenseMatrix gram_matrix(const DenseMatrix& t) {
  check_stochastic(t, "gram_matrix", /*require_positive=*/true);
  const std::size_t m = t.rows();
  if (m < 2) throw DimensionError("gram_matrix: m must be >= 2");
  const std::size_t k = (m - 1) * (m - 1);

  std::vector<DenseMatrix> basis;
  basis.reserve(k);
  for (std::size_t rho = 0; rho + 1 < m; ++rho)
    for (std::size_t sigma = 0; sigma + 1 < m; ++sigma)
      basis.push_back(margin_zero_basis(rho, sigma, m));

  std::vector<double> diag(k);
  for (std::size_t i = 0; i < k; ++i) diag[i] = weighted_quadratic_form(t, basis[i]);

  DenseMatrix gram(k, k);
  for (std::size_t i = 0; i < k; ++i) {
    gram(i, i) = diag[i];
    for (std::size_t j = i + 1; j < k; ++j) {
      const double mixed = weighted_quadratic_form(t, basis[i] + basis[j]);
      const double g = 0.5 * (mixed - diag[i] - diag[j]);  // polarization
      gram(i, j) = g;
      gram(j, i) = g;
    }
  }
  return gram;
}

DenseMatrix covariance_matrix(const DenseMatrix& t) {
  check_stochastic(t, "covariance_matrix", /*require_positive=*/false);
  const std::size_t m = t.rows();
  DenseMatrix k(2 * m, 2 * m);
  for (std::size_t i = 0; i < 2 * m; ++i) k(i, i) = 1.0;
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t s = 0; s < m; ++s) {
      k(r, m + s) = -t(r, s);
      k(m + s, r) = -t(r, s);
    }
  return k;
}

DenseMatrix precision_block(const DenseMatrix& t) {
  check_stochastic(t, "precision_block", /*require_positive=*/false);
  const std::size_t m = t.rows();
  const std::size_t dim = 2 * m - 1;
  DenseMatrix h(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) h(i, i) = 1.0;
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t s = 0; s + 1 < m; ++s) {  // t truncated to m-1 columns
      h(r, m + s) = t(r, s);
      h(m + s, r) = t(r, s);
    }
  return h;
}

DenseMatrix adjugate(const DenseMatrix& a) {
  if (!a.square()) throw DimensionError("adjugate: matrix not square");
  const std::size_t n = a.rows();
  if (n == 1) return DenseMatrix::identity(1);
  DenseMatrix adj(n, n);
  DenseMatrix minor(n - 1, n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t r = 0, mr = 0; r < n; ++r) {
        if (r == i) continue;
        for (std::size_t c = 0, mc = 0; c < n; ++c) {
          if (c == j) continue;
          minor(mr, mc) = a(r, c);
          ++mc;
        }
        ++mr;
      }
      const double cof = (((i + j) & 1u) ? -1.0 : 1.0) * lu_determinant(minor);
      adj(j, i) = cof;
    }
  }
  return adj;
}

double adjugate_constant(const DenseMatrix& t) {
  check_stochastic(t, "adjugate_constant", /*require_positive=*/false);
  const std::vector<double> lambdas = stochastic_spectrum(t);
  double prod = 1.0;
  for (std::size_t r = 1; r < lambdas.size(); ++r) prod *= 1.0 - lambdas[r];
  return prod / static_cast<double>(t.rows());
}

SpectrumPairingReport spectrum_pairing_check(const DenseMatrix& t, double tol) {
  check_stochastic(t, "spectrum_pairing_check", /*require_positive=*/false);
  SpectrumPairingReport report;
  report.covariance_eigenvalues = symmetric_eigenvalues(covariance_matrix(t));
  for (double l : stochastic_spectrum(t)) {
    const double root = std::sqrt(l);
    report.paired_eigenvalues.push_back(1.0 + root);
    report.paired_eigenvalues.push_back(1.0 - root);
  }
  std::sort(report.paired_eigenvalues.rbegin(), report.paired_eigenvalues.rend());
  for (std::size_t i = 0; i < report.paired_eigenvalues.size(); ++i)
    report.max_gap = std::max(report.max_gap,
                              std::abs(report.paired_eigenvalues[i] -
                                       report.covariance_eigenvalues[i]));
  report.pass = report.max_gap <= tol;
  return report;
}

std::string DeterminantIdentityReport::to_json() const {
  std::ostringstream out;
  out << "{\"checks\":[";
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const auto& c = checks[i];
    if (i) out << ',';
    out << "{\"name\":\"" << c.name << "\",\"lhs\":" << fmt_g17(c.lhs)
        << ",\"rhs\":" << fmt_g17(c.rhs) << ",\"rel_error\":" << fmt_g17(c.rel_error)
        << ",\"pass\":" << (c.pass ? "true" : "false") << '}';
  }
  out << "],\"max_rel_error\":" << fmt_g17(max_rel_error)
      << ",\"pass\":" << (pass ? "true" : "false") << '}';
  return out.str();
}

DeterminantIdentityReport verify_determinant_identities(const DenseMatrix& t, double tol) {
  check_stochastic(t, "verify_determinant_identities", /*require_positive=*/true);
  const std::size_t m = t.rows();

  double log_prod_t = 0.0;
  for (double x : t.data()) log_prod_t += std::log(x);
  const double prod_t = std::exp(log_prod_t);

  const double det_gram = m == 1 ? 1.0 : lu_determinant(gram_matrix(t));
  const double det_h = lu_determinant(precision_block(t));
  const double det_block =
      lu_determinant(DenseMatrix::identity(m) + DenseMatrix::uniform_projection(m) -
                     t.transpose() * t);
  const double c = adjugate_constant(t);

  const std::vector<double> lambdas = stochastic_spectrum(t);
  double tail_prod = 1.0;
  for (std::size_t r = 1; r < m; ++r) tail_prod *= 1.0 - lambdas[r];

  const DenseMatrix adj = adjugate(covariance_matrix(t));
  double chi_adj_chi = 0.0;
  for (double x : adj.data()) chi_adj_chi += x;
  chi_adj_chi /= static_cast<double>(2 * m);  // chi = all-ones / sqrt(2m)

  DeterminantIdentityReport report;
  report.checks.push_back(make_check(
      "gaussian_prefactor",
      std::exp(-0.5 * (std::log(static_cast<double>(m)) + log_prod_t + std::log(det_gram))),
      1.0 / std::sqrt(det_block), tol));
  report.checks.push_back(
      make_check("schur_complement", 1.0 / det_gram, prod_t / det_h, tol));
  report.checks.push_back(make_check("adjugate_cofactor", det_h, c, tol));
  report.checks.push_back(make_check("matrix_determinant", 2.0 * tail_prod, chi_adj_chi, tol));

  report.max_rel_error = 0.0;
  report.pass = true;
  for (const auto& chk : report.checks) {
    report.max_rel_error = std::max(report.max_rel_error, chk.rel_error);
    report.pass = report.pass && chk.pass;
  }
  return report;
}

FluctuationModel build_fluctuation_model(const DenseMatrix& t) {
  check_stochastic(t, "build_fluctuation_model", /*require_positive=*/true);
  FluctuationModel model;
  model.m = t.rows();
  model.t = t;
  if (model.m >= 2) {
    for (std::size_t rho = 0; rho + 1 < model.m; ++rho)
      for (std::size_t sigma = 0; sigma + 1 < model.m; ++sigma)
        model.basis.push_back(margin_zero_basis(rho, sigma, model.m));
    model.gram = gram_matrix(t);
  }
  model.precision = precision_block(t);
  model.covariance = covariance_matrix(t);
  model.lambdas = stochastic_spectrum(t);
  model.c = adjugate_constant(t);
  model.chi.assign(2 * model.m, 1.0 / std::sqrt(static_cast<double>(2 * model.m)));
  return model;
}

}  // namespace permlab
