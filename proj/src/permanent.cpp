#include "permlab/permanent.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <thread>

#include "compensated.hpp"
#include "permlab/errors.hpp"

namespace permlab {

namespace {

using detail::dd_add;
using detail::TwoDouble;

BlockExpandedMatrix expand(const DenseMatrix& b, std::size_t n) {
  if (!b.square()) throw DimensionError("build_block_matrix: seed not square");
  if (n < 1) throw DomainError("build_block_matrix: n must be >= 1");
  const std::size_t m = b.rows();
  const std::size_t dim = m * n;
  DenseMatrix a(dim, dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) a(i, j) = b(i / n, j / n);
  return BlockExpandedMatrix{m, n, std::move(a)};
}

// Scale every row by its max |entry| so products stay in range; the factored
// log is added back at the end. A zero row means a zero permanent.
struct RowScaled {
  DenseMatrix a{1, 1};
  double log_scale = 0.0;
  bool zero = false;
};

RowScaled row_scale(const DenseMatrix& a) {
  RowScaled out;
  out.a = a;
  const std::size_t n = a.rows();
  for (std::size_t r = 0; r < n; ++r) {
    double mx = 0.0;
    for (std::size_t c = 0; c < n; ++c) mx = std::max(mx, std::abs(a(r, c)));
    if (mx == 0.0) {
      out.zero = true;
      return out;
    }
    out.log_scale += std::log(mx);
    for (std::size_t c = 0; c < n; ++c) out.a(r, c) /= mx;
  }
  return out;
}

void naive_sum(const DenseMatrix& a, std::size_t row, std::uint32_t used, double partial,
               TwoDouble& sum) {
  const std::size_t n = a.rows();
  if (row == n) {
    sum = dd_add(sum, partial);
    return;
  }
  for (std::size_t c = 0; c < n; ++c) {
    if (used & (1u << c)) continue;
    double p = partial * a(row, c);
    if (p == 0.0) continue;  // dead subtree
    naive_sum(a, row + 1, used | (1u << c), p, sum);
  }
}

struct RyserChunk {
  std::uint64_t first = 0;
  std::uint64_t last = 0;  // inclusive
  TwoDouble sum;
};

// Sum of (-1)^(n-|S|) * prod_i rowsum_i(S) for subset indices k in
// [first, last], subsets visited in Gray-code order gray(k) = k ^ (k >> 1).
void ryser_chunk(const DenseMatrix& a, RyserChunk& chunk) {
  const std::size_t n = a.rows();
  std::uint64_t g = chunk.first ^ (chunk.first >> 1);
  std::vector<double> rowsum(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    if (!(g & (std::uint64_t{1} << j))) continue;
    for (std::size_t i = 0; i < n; ++i) rowsum[i] += a(i, j);
  }
  int popcount = std::popcount(g);

  for (std::uint64_t k = chunk.first;; ++k) {
    double prod = 1.0;
    for (std::size_t i = 0; i < n; ++i) prod *= rowsum[i];
    const bool negative = ((n - static_cast<std::size_t>(popcount)) & 1u) != 0;
    chunk.sum = dd_add(chunk.sum, negative ? -prod : prod);
    if (k == chunk.last) break;
    const unsigned j = static_cast<unsigned>(std::countr_zero(k + 1));
    const std::uint64_t bit = std::uint64_t{1} << j;
    if (g & bit) {
      for (std::size_t i = 0; i < n; ++i) rowsum[i] -= a(i, j);
      --popcount;
    } else {
      for (std::size_t i = 0; i < n; ++i) rowsum[i] += a(i, j);
      ++popcount;
    }
    g ^= bit;
  }
}

}  // namespace

BlockExpandedMatrix build_block_matrix(const PositiveBlockMatrix& b, std::size_t n) {
  return expand(b.entries(), n);
}

BlockExpandedMatrix build_block_matrix(const DenseMatrix& b, std::size_t n) {
  if (!b.all_finite()) throw DomainError("build_block_matrix: nonfinite entry");
  return expand(b, n);
}

LogNonneg permanent_naive(const DenseMatrix& a) {
  if (!a.square()) throw DimensionError("permanent_naive: matrix not square");
  if (!a.all_finite()) throw DomainError("permanent_naive: nonfinite entry");
  if (a.rows() > 12) throw SizeError("permanent_naive: dimension exceeds enumeration guard (12)");

  RowScaled scaled = row_scale(a);
  if (scaled.zero) return LogNonneg::zero();
  TwoDouble sum;
  naive_sum(scaled.a, 0, 0, 1.0, sum);
  const double value = sum.rounded();
  if (value == 0.0) return LogNonneg::zero();
  if (value < 0.0) throw DomainError("permanent_naive: negative permanent (signed entries)");
  return LogNonneg::from_log(std::log(value) + scaled.log_scale);
}

LogNonneg permanent_ryser(const DenseMatrix& a, RyserOptions options) {
  if (!a.square()) throw DimensionError("permanent_ryser: matrix not square");
  if (!a.all_finite()) throw DomainError("permanent_ryser: nonfinite entry");
  const std::size_t n = a.rows();
  if (n > options.max_dim || n > 62)
    throw SizeError("permanent_ryser: dimension exceeds subset-enumeration guard");
  for (double x : a.data())
    if (x < 0.0) throw DomainError("permanent_ryser: entries must be nonnegative");

  RowScaled scaled = row_scale(a);
  if (scaled.zero) return LogNonneg::zero();

  const std::uint64_t total = (std::uint64_t{1} << n) - 1;  // subsets 1..2^n-1
  std::uint64_t workers = options.workers == 0 ? 1 : options.workers;
  workers = std::min<std::uint64_t>(workers, total);

  std::vector<RyserChunk> chunks(workers);
  for (std::uint64_t w = 0; w < workers; ++w) {
    chunks[w].first =
        1 + static_cast<std::uint64_t>((static_cast<unsigned __int128>(total) * w) / workers);
    chunks[w].last = static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(total) * (w + 1)) / workers);
  }

  if (workers == 1) {
    ryser_chunk(scaled.a, chunks[0]);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (auto& chunk : chunks)
      pool.emplace_back([&a = scaled.a, &chunk] { ryser_chunk(a, chunk); });
    for (auto& t : pool) t.join();
  }

  TwoDouble sum;
  for (const auto& chunk : chunks) sum = dd_add(sum, chunk.sum);
  double value = sum.rounded();
  // Entries are nonnegative, so a (tiny) negative total can only be roundoff.
  if (value <= 0.0) return LogNonneg::zero();
  return LogNonneg::from_log(std::log(value) + scaled.log_scale);
}

}  // namespace permlab
