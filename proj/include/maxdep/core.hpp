#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

namespace maxdep {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class RangeError : public Error {
 public:
  using Error::Error;
};

class InvariantError : public Error {
 public:
  using Error::Error;
};

class DuplicateLabelError : public Error {
 public:
  using Error::Error;
};

// Row and column are 0-based indices into the offending matrix.
class NonFiniteError : public Error {
 public:
  NonFiniteError(std::size_t row, std::size_t col)
      : Error("non-finite value at row " + std::to_string(row) + ", column " +
              std::to_string(col)),
        row_(row),
        col_(col) {}

  std::size_t row() const noexcept { return row_; }
  std::size_t col() const noexcept { return col_; }

 private:
  std::size_t row_;
  std::size_t col_;
};

// ---------------------------------------------------------------------------
// LocationId
// ---------------------------------------------------------------------------

class LocationId {
 public:
  explicit LocationId(std::string label) : label_(std::move(label)) {
    if (label_.empty()) throw InvariantError("location label must be nonempty");
  }

  const std::string& label() const noexcept { return label_; }

  friend bool operator==(const LocationId&, const LocationId&) = default;

 private:
  std::string label_;
};

namespace detail {

inline std::vector<LocationId> make_locations(const std::vector<std::string>& labels) {
  std::vector<LocationId> out;
  out.reserve(labels.size());
  std::unordered_set<std::string> seen;
  for (const auto& l : labels) {
    if (!seen.insert(l).second) throw DuplicateLabelError("duplicate location label '" + l + "'");
    out.emplace_back(l);
  }
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// BlockMaximaTable: n x k raw block maxima, row-major.
// ---------------------------------------------------------------------------

class BlockMaximaTable {
 public:
  /// Validates shape, finiteness and label uniqueness. `values` is row-major n x k.
  BlockMaximaTable(std::vector<std::string> labels, std::vector<double> values, std::size_t n) {
    const std::size_t k = labels.size();
    if (k < 2) throw DimensionError("at least 2 locations required, got " + std::to_string(k));
    if (n < 2) throw DimensionError("at least 2 observations required, got " + std::to_string(n));
    if (values.size() != n * k)
      throw DimensionError("value count " + std::to_string(values.size()) + " does not match " +
                           std::to_string(n) + " x " + std::to_string(k));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < k; ++j)
        if (!std::isfinite(values[i * k + j])) throw NonFiniteError(i, j);
    locations_ = detail::make_locations(labels);
    values_ = std::move(values);
    n_ = n;
  }

  std::size_t n() const noexcept { return n_; }
  std::size_t k() const noexcept { return locations_.size(); }
  const std::vector<LocationId>& locations() const noexcept { return locations_; }
  double operator()(std::size_t row, std::size_t col) const { return values_[row * k() + col]; }
  std::span<const double> row(std::size_t i) const { return {values_.data() + i * k(), k()}; }
  std::span<const double> values() const noexcept { return values_; }

  std::vector<double> column(std::size_t j) const {
    std::vector<double> c(n_);
    for (std::size_t i = 0; i < n_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  std::vector<std::string> labels() const {
    std::vector<std::string> out;
    for (const auto& l : locations_) out.push_back(l.label());
    return out;
  }

 private:
  std::vector<LocationId> locations_;
  std::vector<double> values_;
  std::size_t n_ = 0;
};

/// Builds a table from a labeled list of rows.
inline BlockMaximaTable validate_table(const std::vector<std::string>& labels,
                                       const std::vector<std::vector<double>>& rows) {
  const std::size_t k = labels.size();
  if (k < 2) throw DimensionError("at least 2 locations required, got " + std::to_string(k));
  std::vector<double> flat;
  flat.reserve(rows.size() * k);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != k)
      throw DimensionError("row " + std::to_string(i) + " has " + std::to_string(rows[i].size()) +
                           " values, expected " + std::to_string(k));
    flat.insert(flat.end(), rows[i].begin(), rows[i].end());
  }
  return BlockMaximaTable(labels, std::move(flat), rows.size());
}

// ---------------------------------------------------------------------------
// PseudoObservations: n x k values in (0, 1], row-major.
// ---------------------------------------------------------------------------

class PseudoObservations {
 public:
  PseudoObservations(std::vector<std::string> labels, std::vector<double> u, std::size_t n) {
    const std::size_t k = labels.size();
    if (k < 1 || n < 1) throw DimensionError("empty pseudo-observation matrix");
    if (u.size() != n * k) throw DimensionError("pseudo-observation size mismatch");
    for (std::size_t i = 0; i < u.size(); ++i)
      if (!(u[i] > 0.0 && u[i] <= 1.0))
        throw InvariantError("pseudo-observation outside (0, 1] at row " + std::to_string(i / k) +
                             ", column " + std::to_string(i % k));
    locations_ = detail::make_locations(labels);
    u_ = std::move(u);
    n_ = n;
  }

  std::size_t n() const noexcept { return n_; }
  std::size_t k() const noexcept { return locations_.size(); }
  const std::vector<LocationId>& locations() const noexcept { return locations_; }
  double operator()(std::size_t row, std::size_t col) const { return u_[row * k() + col]; }
  std::span<const double> row(std::size_t i) const { return {u_.data() + i * k(), k()}; }

 private:
  std::vector<LocationId> locations_;
  std::vector<double> u_;
  std::size_t n_ = 0;
};

// ---------------------------------------------------------------------------
// SubsetIndex: nonempty, sorted, 0-based column indices.
// ---------------------------------------------------------------------------

class SubsetIndex {
 public:
  explicit SubsetIndex(std::vector<std::size_t> members) : members_(std::move(members)) {
    std::sort(members_.begin(), members_.end());
    if (members_.empty()) throw InvariantError("subset must be nonempty");
    if (std::adjacent_find(members_.begin(), members_.end()) != members_.end())
      throw InvariantError("subset has repeated members");
  }

  SubsetIndex(std::initializer_list<std::size_t> members)
      : SubsetIndex(std::vector<std::size_t>(members)) {}

  /// The full set {0, ..., k-1}.
  static SubsetIndex full(std::size_t k) {
    std::vector<std::size_t> m(k);
    for (std::size_t j = 0; j < k; ++j) m[j] = j;
    return SubsetIndex(std::move(m));
  }

  std::size_t size() const noexcept { return members_.size(); }
  std::span<const std::size_t> members() const noexcept { return members_; }
  std::size_t operator[](std::size_t i) const { return members_[i]; }

  /// Throws DimensionError if any member is not a valid column of a k-column table.
  void check_against(std::size_t k) const {
    if (members_.back() >= k)
      throw DimensionError("subset member " + std::to_string(members_.back()) +
                           " out of range for " + std::to_string(k) + " locations");
  }

  std::uint32_t mask() const {
    if (members_.back() >= 32) throw DimensionError("subset too wide for a bitmask");
    std::uint32_t m = 0;
    for (auto j : members_) m |= (std::uint32_t{1} << j);
    return m;
  }

  /// Ordering used everywhere: by size, then lexicographic.
  friend bool operator<(const SubsetIndex& a, const SubsetIndex& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a.members_ < b.members_;
  }
  friend bool operator==(const SubsetIndex&, const SubsetIndex&) = default;

 private:
  std::vector<std::size_t> members_;
};

inline constexpr std::size_t kMaxSubsetDimension = 20;

/// Visits every subset of {0..k-1} with size >= min_size in (size, lexicographic)
/// order. The callback receives the sorted members and the bitmask.
template <typename Fn>
void for_each_subset(std::size_t k, std::size_t min_size, Fn&& fn) {
  if (k > kMaxSubsetDimension)
    throw DimensionError("subset enumeration capped at k = 20, got " + std::to_string(k));
  if (min_size < 1 || min_size > k) throw RangeError("min_size must lie in [1, k]");
  std::vector<std::size_t> idx;
  for (std::size_t size = min_size; size <= k; ++size) {
    idx.resize(size);
    for (std::size_t i = 0; i < size; ++i) idx[i] = i;
    while (true) {
      std::uint32_t mask = 0;
      for (auto j : idx) mask |= (std::uint32_t{1} << j);
      fn(std::span<const std::size_t>(idx), mask);
      // advance to the next combination in lexicographic order
      std::size_t pos = size;
      while (pos > 0 && idx[pos - 1] == k - size + pos - 1) --pos;
      if (pos == 0) break;
      ++idx[pos - 1];
      for (std::size_t i = pos; i < size; ++i) idx[i] = idx[i - 1] + 1;
    }
  }
}

inline std::vector<SubsetIndex> enumerate_subsets(std::size_t k, std::size_t min_size) {
  if (k < 2) throw DimensionError("subset enumeration requires k >= 2");
  std::vector<SubsetIndex> out;
  for_each_subset(k, min_size, [&](std::span<const std::size_t> m, std::uint32_t) {
    out.emplace_back(std::vector<std::size_t>(m.begin(), m.end()));
  });
  return out;
}

// ---------------------------------------------------------------------------
// ExtremalCoefficientSet: epsilon_I for every nonempty I of {0..k-1}.
// ---------------------------------------------------------------------------

class ExtremalCoefficientSet {
 public:
  /// `by_mask[m]` holds epsilon for the subset with bitmask m; entry 0 is ignored.
  ExtremalCoefficientSet(std::size_t k, std::vector<double> by_mask) : k_(k), eps_(std::move(by_mask)) {
    if (k < 1 || k > kMaxSubsetDimension)
      throw DimensionError("extremal coefficient set requires 1 <= k <= 20");
    const std::size_t count = std::size_t{1} << k;
    if (eps_.size() != count)
      throw InvariantError("expected " + std::to_string(count) + " mask slots");
    eps_[0] = 0.0;
    constexpr double tol = 1e-12;
    for (std::size_t m = 1; m < count; ++m) {
      const double e = eps_[m];
      const auto size = static_cast<double>(std::popcount(static_cast<std::uint32_t>(m)));
      if (!std::isfinite(e)) throw InvariantError("non-finite extremal coefficient");
      if (size == 1.0 && e != 1.0) throw InvariantError("singleton extremal coefficient must be 1");
      if (e < 1.0 - tol || e > size * (1.0 + tol))
        throw InvariantError("extremal coefficient outside [1, |I|] for mask " + std::to_string(m));
      for (std::size_t j = 0; j < k; ++j) {
        const std::size_t sup = m | (std::size_t{1} << j);
        if (sup != m && eps_[sup] < e - tol * e)
          throw InvariantError("extremal coefficients not monotone under inclusion");
      }
    }
  }

  std::size_t k() const noexcept { return k_; }
  double at_mask(std::uint32_t mask) const { return eps_.at(mask); }
  double operator[](const SubsetIndex& s) const {
    s.check_against(k_);
    return eps_[s.mask()];
  }
  double full() const { return eps_.back(); }

 private:
  std::size_t k_;
  std::vector<double> eps_;
};

// ---------------------------------------------------------------------------
// DependenceReport
// ---------------------------------------------------------------------------

struct ConfidenceInterval {
  double lower = 0.0;
  double upper = 0.0;
  double level = 0.95;
  std::size_t replicates = 0;
};

struct DependenceReport {
  SubsetIndex subset;
  std::vector<std::string> labels;
  double v_hat = 0.0;
  std::optional<double> madogram;
  std::optional<double> extremal_coefficient;
  std::optional<ConfidenceInterval> ci;
};

/// Smallest value the empirical variogram can take on n rows over a subset of size k.
inline double variogram_finite_sample_floor(std::size_t k, std::size_t n) {
  const double kk = static_cast<double>(k);
  const double nn = static_cast<double>(n);
  return 1.0 - ((kk + 1.0) / (kk - 1.0)) * ((nn - 1.0) / nn);
}

}  // namespace maxdep
