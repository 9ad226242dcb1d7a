#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "maxdep/core.hpp"

namespace maxdep {

/// Symmetric logistic extreme-value dependence: l(t) = (sum_j t_j^(1/alpha))^alpha.
/// alpha = 1 is independence; alpha -> 0 approaches total dependence.
class LogisticModel {
 public:
  LogisticModel(double alpha, std::size_t k) : alpha_(alpha), k_(k) {
    if (!(alpha > 0.0 && alpha <= 1.0))
      throw RangeError("logistic alpha must lie in (0, 1], got " + std::to_string(alpha));
    if (k < 2) throw DimensionError("logistic model needs k >= 2");
  }

  double alpha() const noexcept { return alpha_; }
  std::size_t k() const noexcept { return k_; }

 private:
  double alpha_;
  std::size_t k_;
};

class UnitTailArgs {
 public:
  explicit UnitTailArgs(std::vector<double> t) : t_(std::move(t)) {
    for (double x : t_)
      if (!(x > 0.0) || !std::isfinite(x))
        throw RangeError("tail dependence arguments must be positive and finite");
  }

  std::span<const double> values() const noexcept { return t_; }
  std::size_t size() const noexcept { return t_.size(); }

 private:
  std::vector<double> t_;
};

/// Evaluated as max(t) * (sum (t_j / max t)^(1/alpha))^alpha so that small alpha
/// does not overflow.
inline double logistic_tail_dependence(const LogisticModel& model, const UnitTailArgs& t) {
  if (t.size() != model.k())
    throw DimensionError("tail argument has length " + std::to_string(t.size()) + ", model has k = " +
                         std::to_string(model.k()));
  const auto v = t.values();
  const double top = *std::max_element(v.begin(), v.end());
  const double inv = 1.0 / model.alpha();
  double sum = 0.0;
  for (double x : v) sum += std::pow(x / top, inv);
  return top * std::pow(sum, model.alpha());
}

/// epsilon_I = |I|^alpha for every nonempty subset.
inline ExtremalCoefficientSet logistic_extremal_coefficients(const LogisticModel& model) {
  const std::size_t k = model.k();
  if (k > kMaxSubsetDimension)
    throw DimensionError("extremal coefficient set capped at k = 20, got " + std::to_string(k));
  std::vector<double> power(k + 1);
  power[1] = 1.0;
  for (std::size_t s = 2; s <= k; ++s) power[s] = std::pow(static_cast<double>(s), model.alpha());
  std::vector<double> eps(std::size_t{1} << k);
  for (std::size_t m = 1; m < eps.size(); ++m)
    eps[m] = power[std::popcount(static_cast<std::uint32_t>(m))];
  return ExtremalCoefficientSet(k, std::move(eps));
}

namespace detail {

// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// e / (1 + e) as an unevaluated sum hi + lo, accurate well beyond one ulp.
// The same per-size term recurs C(k, m) times in the signed sum, so its
// rounding error must not be left in.
struct SplitRatio {
  double hi;
  double lo;
};

inline SplitRatio exact_ratio(double e) {
  const double s = 1.0 + e;
  const double bv = s - 1.0;
  const double s_err = (1.0 - (s - bv)) + (e - bv);  // 1 + e == s + s_err exactly
  const double q = e / s;
  const double rem = std::fma(-q, s, e);             // e - q s exactly
  return {q, (rem - q * s_err) / s};
}

}  // namespace detail

/// Variogram from extremal coefficients by inclusion-exclusion:
///
///   v = 1 - (k+1)/(k-1) * [ e_full/(1+e_full) - sum_{I != {}} (-1)^(|I|+1) e_I/(1+e_I) ]
///
/// The bracket is E(max_j U_j) - E(min_j U_j) for the uniform margins U_j. The
/// sum runs over all 2^k - 1 subsets in (size, lexicographic) order, the full
/// set included.
inline double variogram_from_extremal_coefficients(const ExtremalCoefficientSet& eps) {
  const std::size_t k = eps.k();
  if (k < 2) throw DimensionError("variogram needs k >= 2");
  detail::CompensatedSum expected_range;
  const auto full = detail::exact_ratio(eps.full());
  expected_range.add(full.hi);
  expected_range.add(full.lo);
  for_each_subset(k, 1, [&](std::span<const std::size_t> members, std::uint32_t mask) {
    const auto term = detail::exact_ratio(eps.at_mask(mask));
    const double sign = members.size() % 2 == 1 ? -1.0 : 1.0;
    expected_range.add(sign * term.hi);
    expected_range.add(sign * term.lo);
  });
  const double kk = static_cast<double>(k);
  return 1.0 - ((kk + 1.0) / (kk - 1.0)) * expected_range.value();
}

/// Madogram from the pairwise tail dependence value: nu = l/(1+l) - 1/2.
inline double madogram_from_tail_dependence(double l_value) {
  if (!(l_value >= 1.0 && l_value <= 2.0))
    throw RangeError("pairwise tail dependence must lie in [1, 2], got " + std::to_string(l_value));
  return l_value / (1.0 + l_value) - 0.5;
}

inline double pairwise_variogram_from_madogram(double nu) {
  if (!(nu >= 0.0 && nu <= 1.0 / 6.0))
    throw RangeError("madogram must lie in [0, 1/6], got " + std::to_string(nu));
  return 1.0 - 6.0 * nu;
}

inline double logistic_variogram(const LogisticModel& model) {
  return variogram_from_extremal_coefficients(logistic_extremal_coefficients(model));
}

}  // namespace maxdep
