#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "permlab/linalg.hpp"
#include "permlab/scaling.hpp"

namespace permlab {

/// Nonnegative integer m x m matrix with every row and column summing to n:
/// the block-occupancy pattern of a permutation of [m*n].
class ContingencyTable {
 public:
  ContingencyTable(std::size_t m, std::size_t n, std::vector<std::int64_t> entries);

  std::size_t m() const { return m_; }
  std::size_t n() const { return n_; }
  std::int64_t operator()(std::size_t r, std::size_t s) const { return q_[r * m_ + s]; }
  const std::vector<std::int64_t>& entries() const { return q_; }

 private:
  std::size_t m_;
  std::size_t n_;
  std::vector<std::int64_t> q_;
};

/// Visit every table exactly once, in lexicographic order of the row-major
/// reading. Only the (m-1)^2 leading entries are searched; the last row and
/// column are forced by the margins.
void enumerate_contingency_tables(std::size_t m, std::size_t n,
                                  const std::function<void(const ContingencyTable&)>& visit);

/// All tables, materialized (small m, n only).
std::vector<ContingencyTable> contingency_tables(std::size_t m, std::size_t n);

/// ln of an upper-bound estimate of the table count: each of the first m-1
/// rows ranges over the weak compositions of n into m parts. Exact for m <= 2.
double log_table_count_estimate(std::size_t m, std::size_t n);

/// ln of the number of permutations of [m*n] with block occupancy q:
/// (n!)^(2m) / prod q_{r,s}!.
double block_occupancy_log_count(const ContingencyTable& q);

struct BlockPermanentResult {
  double log_ratio = 0.0;          // ln( perm(A) / (mn)! )
  std::uint64_t table_count = 0;   // |M(m, n)|
  ContingencyTable argmax_table{1, 0, {0}};  // table with the largest summand
};

struct RatioOptions {
  double table_budget = 5e8;  // estimated-table guard
  unsigned workers = 1;
  bool allow_zero = false;    // raw-matrix overload only
};

/// Exact ln(perm(A^{(m,n)})/(mn)!) as a log-sum-exp over all contingency
/// tables. Enumeration is partitioned by the first searched entry, one
/// contiguous range per worker; per-worker accumulators merge in worker
/// order, so output is deterministic for a fixed worker count.
BlockPermanentResult block_permanent_ratio(const PositiveBlockMatrix& b, std::size_t n,
                                           RatioOptions options = {});

/// Raw-matrix overload: with allow_zero set, zero entries are accepted and
/// contribute exact-zero summands (degenerate-case studies).
BlockPermanentResult block_permanent_ratio(const DenseMatrix& b, std::size_t n,
                                           RatioOptions options = {});

/// Closed-form (n+1)-term ratio for the symmetric two-block seed
/// (1/2)[[1+delta, 1-delta], [1-delta, 1+delta]], delta in [0, 1].
double two_block_exact_ratio(double delta, std::size_t n, unsigned workers = 1);

}  // namespace permlab
