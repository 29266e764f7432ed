#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "permlab/errors.hpp"
#include "permlab/linalg.hpp"

using namespace permlab;

namespace {
double rel_gap(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}
}  // namespace

TEST_CASE("lu_determinant: identity and the two-block fluctuation matrix") {
  CHECK(lu_determinant(DenseMatrix::identity(2)) == doctest::Approx(1.0).epsilon(1e-15));

  const double d2 = 0.25;  // delta^2 at delta = 0.5
  DenseMatrix m(2, 2, {1.0 - d2 / 2.0, d2 / 2.0, d2 / 2.0, 1.0 - d2 / 2.0});
  CHECK(lu_determinant(m) == doctest::Approx(0.75).epsilon(1e-14));
}

TEST_CASE("lu_determinant matches cofactor expansion on random 5x5") {
  std::mt19937 rng(101);
  for (int trial = 0; trial < 20; ++trial) {
    DenseMatrix m = oracle::random_matrix(5, rng);
    const double expected = oracle::cofactor_determinant(m);
    CHECK(rel_gap(lu_determinant(m), expected) <= 1e-12);
  }
}

TEST_CASE("lu_determinant is multiplicative") {
  std::mt19937 rng(102);
  for (int trial = 0; trial < 10; ++trial) {
    DenseMatrix a = oracle::random_matrix(6, rng);
    DenseMatrix b = oracle::random_matrix(6, rng);
    CHECK(rel_gap(lu_determinant(a * b), lu_determinant(a) * lu_determinant(b)) <= 1e-10);
  }
}

TEST_CASE("lu_determinant rejects non-square input") {
  CHECK_THROWS_AS(lu_determinant(DenseMatrix(2, 3)), DimensionError);
}

TEST_CASE("symmetric_eigen: rank-one projection and the two-block seed") {
  auto j2 = DenseMatrix::uniform_projection(2);
  auto vals = symmetric_eigenvalues(j2);
  REQUIRE(vals.size() == 2);
  CHECK(vals[0] == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(vals[1] == doctest::Approx(0.0).scale(1).epsilon(1e-13));

  DenseMatrix b(2, 2, {0.75, 0.25, 0.25, 0.75});
  vals = symmetric_eigenvalues(b);
  CHECK(vals[0] == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(vals[1] == doctest::Approx(0.5).epsilon(1e-13));
}

TEST_CASE("symmetric_eigen matches characteristic-polynomial roots on random 6x6") {
  std::mt19937 rng(103);
  for (int trial = 0; trial < 5; ++trial) {
    DenseMatrix m = oracle::random_symmetric(6, rng);
    auto vals = symmetric_eigenvalues(m);
    auto expected = oracle::charpoly_eigenvalues(m);
    REQUIRE(expected.size() == 6);
    for (std::size_t i = 0; i < 6; ++i)
      CHECK(std::abs(vals[i] - expected[i]) <= 1e-9);
  }
}

TEST_CASE("symmetric_eigen reconstructs the input and preserves the trace") {
  std::mt19937 rng(104);
  DenseMatrix m = oracle::random_symmetric(6, rng);
  const EigenDecomposition eig = symmetric_eigen(m);

  DenseMatrix lambda(6, 6);
  for (std::size_t i = 0; i < 6; ++i) lambda(i, i) = eig.values[i];
  DenseMatrix rebuilt = eig.vectors * lambda * eig.vectors.transpose();
  double err = 0.0, norm = 0.0;
  for (std::size_t i = 0; i < m.data().size(); ++i) {
    err += (rebuilt.data()[i] - m.data()[i]) * (rebuilt.data()[i] - m.data()[i]);
    norm += m.data()[i] * m.data()[i];
  }
  CHECK(std::sqrt(err) <= 1e-10 * std::sqrt(norm));

  double trace = 0.0, sum = 0.0;
  for (std::size_t i = 0; i < 6; ++i) {
    trace += m(i, i);
    sum += eig.values[i];
  }
  CHECK(rel_gap(trace, sum) <= 1e-10);
}

TEST_CASE("symmetric_eigen rejects visible asymmetry") {
  DenseMatrix m(2, 2, {1.0, 0.5, 0.25, 1.0});
  CHECK_THROWS_AS(symmetric_eigen(m), SymmetryError);
}

TEST_CASE("log_factorial small values and difference recurrence") {
  CHECK(log_factorial(0) == 0.0);
  CHECK(log_factorial(1) == 0.0);
  CHECK(log_factorial(5) == doctest::Approx(std::log(120.0)).epsilon(1e-15));

  for (std::uint64_t k : {2ull, 17ull, 100ull, 999ull, 5000ull}) {
    const double diff = log_factorial(k) - log_factorial(k - 1);
    CHECK(std::abs(diff - std::log(static_cast<double>(k))) <= 1e-12);
  }
}

TEST_CASE("log_factorial stays inside the two-sided Stirling bounds") {
  // n ln n - n + ln(2 pi n)/2 + 1/(12n+1) < ln n! < same + 1/(12n).
  // Checked where the bound margin ~1/(360 n^3) clears double rounding noise.
  for (std::uint64_t k = 1; k <= 1000; ++k) {
    const double n = static_cast<double>(k);
    const double base = n * std::log(n) - n + 0.5 * std::log(2.0 * M_PI * n);
    const double tail = log_factorial(k) - base;
    CHECK(tail > 1.0 / (12.0 * n + 1.0));
    CHECK(tail < 1.0 / (12.0 * n));
  }
}

TEST_CASE("log_factorial agrees with lgamma at the table edge and beyond") {
  for (std::uint64_t k : {1000ull, 100000ull, 1000000ull, 1000001ull, 5000000ull}) {
    const double expected = std::lgamma(static_cast<double>(k) + 1.0);
    CHECK(rel_gap(log_factorial(k), expected) <= 1e-13);
  }
}

TEST_CASE("log_sum_exp basic values") {
  std::vector<double> two{std::log(1.0), std::log(1.0)};
  CHECK(log_sum_exp(two) == doctest::Approx(std::log(2.0)).epsilon(1e-15));

  std::vector<double> with_zero{-std::numeric_limits<double>::infinity(), std::log(3.0)};
  CHECK(log_sum_exp(with_zero) == doctest::Approx(std::log(3.0)).epsilon(1e-15));

  std::vector<double> empty;
  CHECK_THROWS_AS(log_sum_exp(empty), DomainError);

  std::vector<double> zeros(3, -std::numeric_limits<double>::infinity());
  CHECK(log_sum_exp(zeros) == -std::numeric_limits<double>::infinity());
}

TEST_CASE("log_sum_exp matches an extended-precision oracle on 10^4 terms") {
  std::mt19937 rng(105);
  std::uniform_real_distribution<double> unif(-600.0, 600.0);
  std::vector<double> terms(10000);
  for (auto& t : terms) t = unif(rng);
  const double expected = oracle::log_sum_exp_dd(terms);
  CHECK(std::abs(log_sum_exp(terms) - expected) <=
        1e-13 * std::max(1.0, std::abs(expected)));
}

TEST_CASE("log_sum_exp is permutation invariant") {
  std::mt19937 rng(106);
  std::uniform_real_distribution<double> unif(-50.0, 50.0);
  std::vector<double> terms(512);
  for (auto& t : terms) t = unif(rng);
  const double base = log_sum_exp(terms);
  for (int trial = 0; trial < 5; ++trial) {
    std::shuffle(terms.begin(), terms.end(), rng);
    CHECK(std::abs(log_sum_exp(terms) - base) <= 1e-12 * std::max(1.0, std::abs(base)));
  }
}

TEST_CASE("LogSumAccumulator: any block partition agrees with one pass") {
  std::mt19937 rng(107);
  std::uniform_real_distribution<double> unif(-300.0, 300.0);
  std::vector<double> terms(2048);
  for (auto& t : terms) t = unif(rng);

  LogSumAccumulator one_pass;
  for (double t : terms) one_pass.add(t);

  std::uniform_int_distribution<std::size_t> cut(1, terms.size() - 1);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<std::size_t> cuts{0, terms.size()};
    for (int i = 0; i < 6; ++i) cuts.push_back(cut(rng));
    std::sort(cuts.begin(), cuts.end());
    LogSumAccumulator merged;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      LogSumAccumulator block;
      for (std::size_t k = cuts[i]; k < cuts[i + 1]; ++k) block.add(terms[k]);
      merged.merge(block);
    }
    CHECK(merged.count() == terms.size());
    CHECK(std::abs(merged.log_total() - one_pass.log_total()) <=
          1e-12 * std::max(1.0, std::abs(one_pass.log_total())));
  }
}

TEST_CASE("LogNonneg encodes zero and multiplies by adding logs") {
  CHECK(LogNonneg::from_value(0.0).is_zero());
  CHECK(LogNonneg::zero().is_zero());
  const LogNonneg a = LogNonneg::from_value(3.0);
  const LogNonneg b = LogNonneg::from_log(std::log(5.0));
  CHECK((a * b).log() == doctest::Approx(std::log(15.0)).epsilon(1e-14));
  CHECK((a * LogNonneg::zero()).is_zero());
  CHECK_THROWS_AS(LogNonneg::from_value(-1.0), DomainError);
}
