#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <thread>
#include <utility>
#include <vector>

#include "maxdep/core.hpp"
#include "maxdep/rng.hpp"

namespace maxdep {

enum class TiePolicy {
  midrank,           // tied values share the average of their rank block
  first_occurrence,  // plain empirical CDF: ties all get the top rank of the block
};

struct EstimationOptions {
  TiePolicy tie_policy = TiePolicy::midrank;
};

namespace detail {

// Writes rank/n for one column into out[i * stride].
inline void rank_column(std::span<const double> col, TiePolicy policy, double* out,
                        std::size_t stride) {
  const std::size_t n = col.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return col[a] < col[b]; });
  const double nn = static_cast<double>(n);
  std::size_t start = 0;
  while (start < n) {
    std::size_t end = start + 1;
    while (end < n && col[order[end]] == col[order[start]]) ++end;
    // 1-based ranks start+1 .. end share one value
    const double rank = policy == TiePolicy::midrank
                            ? (static_cast<double>(start + 1) + static_cast<double>(end)) / 2.0
                            : static_cast<double>(end);
    for (std::size_t p = start; p < end; ++p) out[order[p] * stride] = rank / nn;
    start = end;
  }
}

inline void check_subset(const PseudoObservations& pseudo, const SubsetIndex& subset,
                         std::size_t min_size) {
  if (subset.size() < min_size)
    throw DimensionError("subset needs at least " + std::to_string(min_size) + " members, got " +
                         std::to_string(subset.size()));
  subset.check_against(pseudo.k());
}

inline double variogram_scale(std::size_t k) {
  const double kk = static_cast<double>(k);
  return (kk + 1.0) / (kk - 1.0);
}

}  // namespace detail

/// Column-wise empirical distribution transform of a table.
inline PseudoObservations rank_transform(const BlockMaximaTable& table,
                                         const EstimationOptions& opts = {}) {
  const std::size_t n = table.n(), k = table.k();
  std::vector<double> u(n * k);
  for (std::size_t j = 0; j < k; ++j) {
    const auto col = table.column(j);
    detail::rank_column(col, opts.tie_policy, u.data() + j, k);
  }
  return PseudoObservations(table.labels(), std::move(u), n);
}

/// v-hat = 1 - (k+1)/(k-1) * mean over rows of (max - min) across the subset columns.
inline double empirical_variogram(const PseudoObservations& pseudo, const SubsetIndex& subset) {
  detail::check_subset(pseudo, subset, 2);
  double sum = 0.0;
  for (std::size_t i = 0; i < pseudo.n(); ++i) {
    const auto row = pseudo.row(i);
    double hi = row[subset[0]], lo = hi;
    for (auto j : subset.members()) {
      hi = std::max(hi, row[j]);
      lo = std::min(lo, row[j]);
    }
    sum += hi - lo;
  }
  return 1.0 - detail::variogram_scale(subset.size()) * (sum / static_cast<double>(pseudo.n()));
}

/// Same statistic computed as the row-wise maximum absolute pairwise difference.
inline double empirical_variogram_via_pairs(const PseudoObservations& pseudo,
                                            const SubsetIndex& subset) {
  detail::check_subset(pseudo, subset, 2);
  const auto m = subset.members();
  double sum = 0.0;
  for (std::size_t i = 0; i < pseudo.n(); ++i) {
    const auto row = pseudo.row(i);
    double widest = 0.0;
    for (std::size_t a = 0; a < m.size(); ++a)
      for (std::size_t b = a + 1; b < m.size(); ++b)
        widest = std::max(widest, std::abs(row[m[a]] - row[m[b]]));
    sum += widest;
  }
  return 1.0 - detail::variogram_scale(subset.size()) * (sum / static_cast<double>(pseudo.n()));
}

/// Madogram: half the mean absolute difference of two pseudo-observation columns.
inline double empirical_madogram(const PseudoObservations& pseudo, const SubsetIndex& pair) {
  if (pair.size() != 2)
    throw DimensionError("madogram needs exactly 2 locations, got " + std::to_string(pair.size()));
  pair.check_against(pseudo.k());
  double sum = 0.0;
  for (std::size_t i = 0; i < pseudo.n(); ++i) {
    const auto row = pseudo.row(i);
    sum += std::abs(row[pair[0]] - row[pair[1]]);
  }
  return sum / (2.0 * static_cast<double>(pseudo.n()));
}

/// Pairwise extremal coefficient (1/2 + nu) / (1/2 - nu).
inline double extremal_coefficient_from_madogram(double nu) {
  if (!(nu >= 0.0 && nu < 0.5))
    throw RangeError("madogram must lie in [0, 1/2) to invert, got " + std::to_string(nu));
  return (0.5 + nu) / (0.5 - nu);
}

// ---------------------------------------------------------------------------
// Bootstrap
// ---------------------------------------------------------------------------

struct BootstrapInterval {
  double lower = 0.0;
  double upper = 0.0;
};

namespace detail {

// Linear interpolation between order statistics (Hyndman-Fan type 7).
inline double quantile_sorted(const std::vector<double>& sorted, double p) {
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

inline double bootstrap_replicate(const BlockMaximaTable& table, const SubsetIndex& subset,
                                  const EstimationOptions& opts, std::uint64_t seed,
                                  std::uint64_t replicate) {
  auto eng = rng::make_stream(seed, replicate);
  const std::size_t n = table.n(), m = subset.size();
  std::vector<double> values(n * m);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = table.row(rng::uniform_index(eng, n));
    for (std::size_t j = 0; j < m; ++j) values[i * m + j] = row[subset[j]];
  }
  std::vector<std::string> labels;
  for (auto j : subset.members()) labels.push_back(table.locations()[j].label());
  const BlockMaximaTable resampled(std::move(labels), std::move(values), n);
  return empirical_variogram(rank_transform(resampled, opts), SubsetIndex::full(m));
}

}  // namespace detail

/// Percentile bootstrap interval for v-hat. Rows are resampled jointly and
/// re-ranked inside every replicate. Replicate r draws from stream r of `seed`,
/// so the interval does not depend on `threads`.
inline BootstrapInterval bootstrap_variogram(const BlockMaximaTable& table,
                                             const SubsetIndex& subset, std::size_t replicates,
                                             double level, std::uint64_t seed,
                                             const EstimationOptions& opts = {},
                                             unsigned threads = 1) {
  if (replicates < 100)
    throw RangeError("bootstrap needs at least 100 replicates, got " + std::to_string(replicates));
  if (!(level > 0.0 && level < 1.0)) throw RangeError("confidence level must lie in (0, 1)");
  if (subset.size() < 2) throw DimensionError("bootstrap subset needs at least 2 members");
  subset.check_against(table.k());

  std::vector<double> stats(replicates);
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(replicates)));
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r)
      stats[r] = detail::bootstrap_replicate(table, subset, opts, seed, r);
  };
  if (threads == 1) {
    work(0, replicates);
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (replicates + threads - 1) / threads;
    for (std::size_t b = 0; b < replicates; b += chunk)
      pool.emplace_back(work, b, std::min(replicates, b + chunk));
  }
  std::sort(stats.begin(), stats.end());
  const double tail = (1.0 - level) / 2.0;
  return {detail::quantile_sorted(stats, tail), detail::quantile_sorted(stats, 1.0 - tail)};
}

}  // namespace maxdep
