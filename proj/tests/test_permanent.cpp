#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "permlab/errors.hpp"
#include "permlab/linalg.hpp"
#include "permlab/permanent.hpp"

using namespace permlab;

TEST_CASE("build_block_matrix reproduces the block rule entrywise") {
  const BlockExpandedMatrix a =
      build_block_matrix(PositiveBlockMatrix(DenseMatrix::uniform_projection(2)), 2);
  CHECK(a.entries.rows() == 4);
  for (double x : a.entries.data()) CHECK(x == 0.5);

  const BlockExpandedMatrix ones = build_block_matrix(DenseMatrix(1, 1, {3.0}), 4);
  CHECK(ones.entries.rows() == 4);
  for (double x : ones.entries.data()) CHECK(x == 3.0);

  const double delta = 0.5;
  DenseMatrix b(2, 2,
                {(1 + delta) / 2, (1 - delta) / 2, (1 - delta) / 2, (1 + delta) / 2});
  const BlockExpandedMatrix two = build_block_matrix(b, 2);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      CHECK(two.entries(i, j) == b(i / 2, j / 2));
}

TEST_CASE("permanent_naive: identity, all-ones, constant half") {
  CHECK(permanent_naive(DenseMatrix::identity(3)).log() == doctest::Approx(0.0));
  CHECK(permanent_naive(DenseMatrix::constant(3, 3, 1.0)).log() ==
        doctest::Approx(std::log(6.0)).epsilon(1e-13));
  CHECK(permanent_naive(DenseMatrix::constant(4, 4, 0.5)).log() ==
        doctest::Approx(std::log(1.5)).epsilon(1e-13));
  CHECK(permanent_naive(DenseMatrix::constant(2, 2, 0.0)).is_zero());
  CHECK_THROWS_AS(permanent_naive(DenseMatrix::constant(13, 13, 1.0)), SizeError);
}

TEST_CASE("permanent_ryser agrees with permanent_naive on random positive matrices") {
  std::mt19937 rng(301);
  for (int trial = 0; trial < 10; ++trial) {
    const DenseMatrix a = oracle::random_positive(8, rng);
    const double expected = permanent_naive(a).log();
    CHECK(permanent_ryser(a).log() == doctest::Approx(expected).epsilon(1e-10));
  }
  CHECK(permanent_ryser(DenseMatrix::identity(3)).log() == doctest::Approx(0.0));
}

TEST_CASE("permanent_ryser guards") {
  CHECK_THROWS_AS(permanent_ryser(DenseMatrix(2, 2, {1.0, -1.0, 1.0, 1.0})), DomainError);
  CHECK_THROWS_AS(permanent_ryser(DenseMatrix::constant(31, 31, 1.0)), SizeError);
  RyserOptions small;
  small.max_dim = 6;
  CHECK_THROWS_AS(permanent_ryser(DenseMatrix::constant(7, 7, 1.0), small), SizeError);
}

TEST_CASE("permanent is invariant under row and column permutations") {
  std::mt19937 rng(302);
  const DenseMatrix a = oracle::random_positive(7, rng);
  const double base = permanent_naive(a).log();
  std::vector<std::size_t> rows(7), cols(7);
  std::iota(rows.begin(), rows.end(), 0);
  std::iota(cols.begin(), cols.end(), 0);
  for (int trial = 0; trial < 5; ++trial) {
    std::shuffle(rows.begin(), rows.end(), rng);
    std::shuffle(cols.begin(), cols.end(), rng);
    DenseMatrix p(7, 7);
    for (std::size_t r = 0; r < 7; ++r)
      for (std::size_t c = 0; c < 7; ++c) p(r, c) = a(rows[r], cols[c]);
    CHECK(permanent_naive(p).log() == doctest::Approx(base).epsilon(1e-10));
    CHECK(permanent_ryser(p).log() == doctest::Approx(base).epsilon(1e-10));
  }
}

TEST_CASE("scaling one row scales the permanent") {
  std::mt19937 rng(303);
  DenseMatrix a = oracle::random_positive(6, rng);
  const double base = permanent_ryser(a).log();
  const double s = 3.7;
  for (std::size_t c = 0; c < 6; ++c) a(2, c) *= s;
  CHECK(permanent_ryser(a).log() == doctest::Approx(base + std::log(s)).epsilon(1e-12));
}

TEST_CASE("uniform block expansions hit the closed form (mn)!/m^(mn)") {
  for (std::size_t m = 1; m <= 4; ++m) {
    for (std::size_t n = 1; n <= 3; ++n) {
      const BlockExpandedMatrix a =
          build_block_matrix(PositiveBlockMatrix(DenseMatrix::uniform_projection(m)), n);
      const double expected = log_factorial(m * n) -
                              static_cast<double>(m * n) * std::log(static_cast<double>(m));
      const double got = permanent_ryser(a.entries).log();
      CHECK(std::abs(got - expected) <= 1e-10 * std::max(1.0, std::abs(expected)));
      if (m * n <= 9)
        CHECK(permanent_naive(a.entries).log() ==
              doctest::Approx(expected).epsilon(1e-10));
    }
  }
}

TEST_CASE("permanent_ryser is deterministic across worker counts") {
  std::mt19937 rng(304);
  const DenseMatrix a = oracle::random_positive(9, rng);
  const double base = permanent_ryser(a, RyserOptions{30, 1}).log();
  for (unsigned workers : {2u, 3u, 4u, 8u}) {
    const double got = permanent_ryser(a, RyserOptions{30, workers}).log();
    CHECK(std::abs(got - base) <= 1e-10 * std::abs(base));
  }
  // Fixed worker count twice: identical bits.
  CHECK(permanent_ryser(a, RyserOptions{30, 4}).log() ==
        permanent_ryser(a, RyserOptions{30, 4}).log());
}
