#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "maxdep/core.hpp"
#include "maxdep/models.hpp"
#include "maxdep/rng.hpp"

namespace maxdep {

inline constexpr double kMinSimulationAlpha = 1e-3;

struct SimulationSpec {
  LogisticModel model;
  std::size_t n = 0;
  std::uint64_t seed = 0;

  void validate() const {
    if (n < 1) throw RangeError("simulation needs n >= 1");
    if (model.alpha() < kMinSimulationAlpha)
      throw RangeError("simulation alpha must lie in [1e-3, 1], got " +
                       std::to_string(model.alpha()));
  }
};

namespace detail {

// alpha * log(S) for S positive alpha-stable with Laplace transform exp(-t^alpha),
// using Kanter's representation with U ~ Unif(0, pi), W ~ Exp(1):
//
//   S = sin(alpha U) / sin(U)^(1/alpha) * (sin((1 - alpha) U) / W)^((1 - alpha) / alpha)
//
// Multiplying the log by alpha removes every 1/alpha factor.
inline double scaled_log_stable(double alpha, double u, double w) {
  return alpha * std::log(std::sin(alpha * u)) - std::log(std::sin(u)) +
         (1.0 - alpha) * (std::log(std::sin((1.0 - alpha) * u)) - std::log(w));
}

inline void sample_logistic_row(const LogisticModel& model, rng::Engine& eng, double* out) {
  const std::size_t k = model.k();
  const double alpha = model.alpha();
  if (alpha == 1.0) {
    for (std::size_t j = 0; j < k; ++j) out[j] = 1.0 / rng::exponential(eng);
    return;
  }
  const double u = std::numbers::pi * rng::uniform_open(eng);
  const double w = rng::exponential(eng);
  const double a_log_s = scaled_log_stable(alpha, u, w);
  // X_j = (S / E_j)^alpha
  for (std::size_t j = 0; j < k; ++j)
    out[j] = std::exp(a_log_s - alpha * std::log(rng::exponential(eng)));
}

}  // namespace detail

/// Exact draws from G(x) = exp{-(sum_j x_j^(-1/alpha))^alpha} with unit Frechet
/// margins. Row i uses random stream i of `spec.seed`. Returns n x k row-major.
inline std::vector<double> sample_logistic_rows(const SimulationSpec& spec) {
  spec.validate();
  const std::size_t k = spec.model.k();
  std::vector<double> values(spec.n * k);
  for (std::size_t i = 0; i < spec.n; ++i) {
    auto eng = rng::make_stream(spec.seed, i);
    detail::sample_logistic_row(spec.model, eng, values.data() + i * k);
  }
  return values;
}

inline std::vector<std::string> synthetic_labels(std::size_t k) {
  std::vector<std::string> labels;
  for (std::size_t j = 0; j < k; ++j) labels.push_back("L" + std::to_string(j + 1));
  return labels;
}

/// Labels are L1..Lk. A single-row spec is valid but a table needs n >= 2, so
/// n = 1 throws DimensionError here; sample_logistic_rows still serves it.
inline BlockMaximaTable sample_logistic(const SimulationSpec& spec) {
  auto values = sample_logistic_rows(spec);
  return BlockMaximaTable(synthetic_labels(spec.model.k()), std::move(values), spec.n);
}

/// Kolmogorov-Smirnov distance between exp(-1/X) and Unif(0, 1), per column.
/// Nonpositive entries map to 0.
inline std::vector<double> margin_check(const BlockMaximaTable& table) {
  std::vector<double> out;
  const double n = static_cast<double>(table.n());
  for (std::size_t j = 0; j < table.k(); ++j) {
    auto u = table.column(j);
    for (double& x : u) x = x > 0.0 ? std::exp(-1.0 / x) : 0.0;
    std::sort(u.begin(), u.end());
    double d = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double rank = static_cast<double>(i);
      d = std::max({d, (rank + 1.0) / n - u[i], u[i] - rank / n});
    }
    out.push_back(d);
  }
  return out;
}

/// KS critical value at the 1% level, asymptotic form 1.63 / sqrt(n).
inline double ks_critical_value_1pct(std::size_t n) { return 1.63 / std::sqrt(static_cast<double>(n)); }

}  // namespace maxdep
