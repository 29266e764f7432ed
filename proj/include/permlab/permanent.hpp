#pragma once

#include <cstddef>

#include "permlab/linalg.hpp"
#include "permlab/scaling.hpp"

namespace permlab {

/// The (m*n) x (m*n) expansion of an m x m seed: entry (i, j) carries the
/// seed value of the blocks i and j fall in.
struct BlockExpandedMatrix {
  std::size_t m = 0;
  std::size_t n = 0;
  DenseMatrix entries{1, 1};
};

BlockExpandedMatrix build_block_matrix(const PositiveBlockMatrix& b, std::size_t n);
/// Raw-matrix variant, used for degenerate (zero-entry) studies.
BlockExpandedMatrix build_block_matrix(const DenseMatrix& b, std::size_t n);

/// Sum over all permutations of the product of entries, in log domain.
/// Enumeration oracle; dimension capped at 12.
LogNonneg permanent_naive(const DenseMatrix& a);

struct RyserOptions {
  std::size_t max_dim = 30;
  unsigned workers = 1;
};

/// Ryser's inclusion-exclusion permanent with Gray-code subset updates.
/// Entries must be nonnegative (the signed inner sums are internal).
/// The subset range is split into contiguous chunks, one per worker, and the
/// compensated partial sums are combined in worker order, so output is
/// deterministic for a fixed worker count.
LogNonneg permanent_ryser(const DenseMatrix& a, RyserOptions options = {});

}  // namespace permlab
