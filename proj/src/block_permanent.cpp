#include "permlab/block_permanent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "permlab/errors.hpp"

namespace permlab {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Depth-first search over the (m-1)^2 free entries in row-major order,
// ascending values, so full tables appear in lexicographic row-major order.
// Forced cells (last column, last row) are kept up to date in the working
// table; Sink::leaf sees the complete table.
//
// Feasibility bounds: each free entry is capped by its row and column
// remainders; a branch dies only through the forced corner cell, which needs
// sum of the free-column totals >= (m-2)*n, so subtrees that cannot reach
// that total are cut, and the final free cell gets the exact lower bound.
template <typename Sink>
class TableSearch {
 public:
  TableSearch(std::size_t m, std::size_t n, Sink& sink)
      : m_(m),
        n_(static_cast<std::int64_t>(n)),
        q_(m * m, 0),
        row_rem_(m, n_),
        col_sum_(m, 0),
        sink_(sink) {}

  // Restricts the first free entry to [first_lo, first_hi]; the full range
  // is [0, n].
  void run(std::int64_t first_lo, std::int64_t first_hi) {
    if (m_ == 1) {
      q_[0] = n_;
      sink_.leaf(q_);
      return;
    }
    cell(0, 0, first_lo, first_hi);
  }

 private:
  void cell(std::size_t r, std::size_t s, std::int64_t force_lo, std::int64_t force_hi) {
    const std::size_t last = m_ - 2;  // last free row/col index
    const std::int64_t need = static_cast<std::int64_t>(m_ - 2) * n_;

    // The most the free-column total can still grow from this cell onward.
    const std::int64_t headroom =
        row_rem_[r] + static_cast<std::int64_t>(last - r) * n_;
    if (free_total_ + headroom < need) return;

    std::int64_t lo = 0;
    if (r == last && s == last) lo = std::max<std::int64_t>(0, need - free_total_);
    std::int64_t hi = std::min(row_rem_[r], n_ - col_sum_[s]);
    if (r == 0 && s == 0) {
      lo = std::max(lo, force_lo);
      hi = std::min(hi, force_hi);
    }

    for (std::int64_t value = lo; value <= hi; ++value) {
      q_[r * m_ + s] = value;
      row_rem_[r] -= value;
      col_sum_[s] += value;
      free_total_ += value;

      if (s == last) {
        q_[r * m_ + (m_ - 1)] = row_rem_[r];  // forced last column
        if (r == last) {
          for (std::size_t c = 0; c + 1 < m_; ++c)
            q_[(m_ - 1) * m_ + c] = n_ - col_sum_[c];  // forced last row
          q_[(m_ - 1) * m_ + (m_ - 1)] = free_total_ - need;
          sink_.leaf(q_);
        } else {
          cell(r + 1, 0, 0, n_);
        }
      } else {
        cell(r, s + 1, 0, n_);
      }

      row_rem_[r] += value;
      col_sum_[s] -= value;
      free_total_ -= value;
    }
    q_[r * m_ + s] = 0;
  }

  std::size_t m_;
  std::int64_t n_;
  std::vector<std::int64_t> q_;
  std::vector<std::int64_t> row_rem_;
  std::vector<std::int64_t> col_sum_;
  std::int64_t free_total_ = 0;  // sum of col_sum_ over free columns
  Sink& sink_;
};

struct VisitorSink {
  std::size_t m;
  std::size_t n;
  const std::function<void(const ContingencyTable&)>& visit;
  void leaf(const std::vector<std::int64_t>& q) { visit(ContingencyTable(m, n, q)); }
};

// Accumulates ln-scale summands term(Q) = base + sum_{r,s} g(q_{r,s}) with
// g(q) = q * ln b_{r,s} - ln q!, tracking count and argmax.
struct RatioSink {
  const std::vector<double>& log_b;  // m*m, -inf allowed
  std::size_t m;
  double base;  // 2m ln n! - ln (mn)!
  LogSumAccumulator acc;
  std::uint64_t count = 0;
  double best = kNegInf;
  bool have_best = false;
  std::vector<std::int64_t> best_q;

  void leaf(const std::vector<std::int64_t>& q) {
    double term = base;
    for (std::size_t i = 0; i < m * m; ++i) {
      const std::int64_t qi = q[i];
      if (qi != 0) term += static_cast<double>(qi) * log_b[i];
      term -= log_factorial(static_cast<std::uint64_t>(qi));
    }
    acc.add(term);
    ++count;
    if (!have_best || term > best) {
      best = term;
      best_q = q;
      have_best = true;
    }
  }
};

std::vector<double> checked_log_entries(const DenseMatrix& b, bool allow_zero) {
  if (!b.square()) throw DimensionError("block_permanent_ratio: seed not square");
  std::vector<double> log_b;
  log_b.reserve(b.data().size());
  for (double x : b.data()) {
    if (!std::isfinite(x) || x < 0.0 || (x == 0.0 && !allow_zero))
      throw DomainError(allow_zero
                            ? "block_permanent_ratio: entries must be finite and nonnegative"
                            : "block_permanent_ratio: entries must be finite and positive");
    log_b.push_back(x == 0.0 ? kNegInf : std::log(x));
  }
  return log_b;
}

BlockPermanentResult ratio_impl(const DenseMatrix& b, std::size_t n, RatioOptions options) {
  if (n < 1) throw DomainError("block_permanent_ratio: n must be >= 1");
  const std::vector<double> log_b = checked_log_entries(b, options.allow_zero);
  const std::size_t m = b.rows();

  const double log_estimate = log_table_count_estimate(m, n);
  if (log_estimate > std::log(options.table_budget))
    throw BudgetError("block_permanent_ratio: table-count estimate exceeds budget",
                      std::exp(log_estimate));

  const double base = 2.0 * static_cast<double>(m) * log_factorial(n) -
                      log_factorial(static_cast<std::uint64_t>(m) * n);

  std::uint64_t workers = options.workers == 0 ? 1 : options.workers;
  if (m == 1) workers = 1;
  workers = std::min<std::uint64_t>(workers, n + 1);

  std::vector<RatioSink> sinks;
  sinks.reserve(workers);
  for (std::uint64_t w = 0; w < workers; ++w) sinks.push_back(RatioSink{log_b, m, base});

  if (workers == 1) {
    TableSearch<RatioSink> search(m, n, sinks[0]);
    search.run(0, static_cast<std::int64_t>(n));
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::uint64_t w = 0; w < workers; ++w) {
      const std::int64_t lo = static_cast<std::int64_t>(((n + 1) * w) / workers);
      const std::int64_t hi = static_cast<std::int64_t>(((n + 1) * (w + 1)) / workers) - 1;
      pool.emplace_back([&sink = sinks[w], m, n, lo, hi] {
        TableSearch<RatioSink> search(m, n, sink);
        search.run(lo, hi);
      });
    }
    for (auto& t : pool) t.join();
  }

  RatioSink& merged = sinks[0];
  for (std::uint64_t w = 1; w < workers; ++w) {
    merged.acc.merge(sinks[w].acc);
    merged.count += sinks[w].count;
    if (sinks[w].have_best && (!merged.have_best || sinks[w].best > merged.best)) {
      merged.best = sinks[w].best;
      merged.best_q = std::move(sinks[w].best_q);
      merged.have_best = true;
    }
  }

  BlockPermanentResult result;
  result.log_ratio = merged.acc.log_total();
  result.table_count = merged.count;
  result.argmax_table = ContingencyTable(m, n, merged.best_q);
  return result;
}

}  // namespace

ContingencyTable::ContingencyTable(std::size_t m, std::size_t n, std::vector<std::int64_t> entries)
    : m_(m), n_(n), q_(std::move(entries)) {
  if (m_ < 1) throw DimensionError("ContingencyTable: m must be >= 1");
  if (q_.size() != m_ * m_) throw DimensionError("ContingencyTable: entry count mismatch");
  const auto nn = static_cast<std::int64_t>(n_);
  for (std::size_t r = 0; r < m_; ++r) {
    std::int64_t row = 0, col = 0;
    for (std::size_t s = 0; s < m_; ++s) {
      if (q_[r * m_ + s] < 0 || q_[r * m_ + s] > nn)
        throw DomainError("ContingencyTable: entry outside [0, n]");
      row += q_[r * m_ + s];
      col += q_[s * m_ + r];
    }
    if (row != nn || col != nn) throw DomainError("ContingencyTable: margin mismatch");
  }
}

void enumerate_contingency_tables(std::size_t m, std::size_t n,
                                  const std::function<void(const ContingencyTable&)>& visit) {
  if (m < 1) throw DimensionError("enumerate_contingency_tables: m must be >= 1");
  VisitorSink sink{m, n, visit};
  TableSearch<VisitorSink> search(m, n, sink);
  search.run(0, static_cast<std::int64_t>(n));
}

std::vector<ContingencyTable> contingency_tables(std::size_t m, std::size_t n) {
  std::vector<ContingencyTable> out;
  enumerate_contingency_tables(m, n, [&](const ContingencyTable& t) { out.push_back(t); });
  return out;
}

double log_table_count_estimate(std::size_t m, std::size_t n) {
  if (m < 1) throw DimensionError("log_table_count_estimate: m must be >= 1");
  if (m == 1) return 0.0;
  const double comps = log_factorial(n + m - 1) - log_factorial(n) - log_factorial(m - 1);
  return static_cast<double>(m - 1) * comps;
}

double block_occupancy_log_count(const ContingencyTable& q) {
  const std::size_t m = q.m();
  double out = 2.0 * static_cast<double>(m) * log_factorial(q.n());
  for (std::int64_t e : q.entries()) out -= log_factorial(static_cast<std::uint64_t>(e));
  return out;
}

BlockPermanentResult block_permanent_ratio(const PositiveBlockMatrix& b, std::size_t n,
                                           RatioOptions options) {
  options.allow_zero = false;
  return ratio_impl(b.entries(), n, options);
}

BlockPermanentResult block_permanent_ratio(const DenseMatrix& b, std::size_t n,
                                           RatioOptions options) {
  return ratio_impl(b, n, options);
}

double two_block_exact_ratio(double delta, std::size_t n, unsigned workers) {
  if (!(delta >= 0.0 && delta <= 1.0))
    throw DomainError("two_block_exact_ratio: delta must lie in [0, 1]");
  const double log_plus = std::log1p(delta);    // ln(1+delta)
  const double log_minus = std::log1p(-delta);  // ln(1-delta), -inf at delta=1
  const double nd = static_cast<double>(n);
  const double base = -2.0 * nd * std::log(2.0) + 4.0 * log_factorial(n) -
                      log_factorial(2 * n);

  auto term = [&](std::uint64_t nu) {
    double t = base - 2.0 * log_factorial(nu) - 2.0 * log_factorial(n - nu);
    if (nu != 0) t += 2.0 * static_cast<double>(nu) * log_plus;
    if (nu != n) t += 2.0 * static_cast<double>(n - nu) * log_minus;
    return t;
  };

  std::uint64_t nw = workers == 0 ? 1 : workers;
  nw = std::min<std::uint64_t>(nw, n + 1);
  std::vector<LogSumAccumulator> parts(nw);
  auto chunk = [&](std::uint64_t w) {
    const std::uint64_t lo = ((n + 1) * w) / nw;
    const std::uint64_t hi = ((n + 1) * (w + 1)) / nw;
    for (std::uint64_t nu = lo; nu < hi; ++nu) parts[w].add(term(nu));
  };
  if (nw == 1) {
    chunk(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nw);
    for (std::uint64_t w = 0; w < nw; ++w) pool.emplace_back(chunk, w);
    for (auto& t : pool) t.join();
  }
  for (std::uint64_t w = 1; w < nw; ++w) parts[0].merge(parts[w]);
  return parts[0].log_total();
}

}  // namespace permlab
