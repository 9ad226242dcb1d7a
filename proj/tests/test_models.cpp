#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "maxdep/models.hpp"

using namespace maxdep;
using Catch::Approx;

namespace {

const double kSqrt2 = std::sqrt(2.0);

ExtremalCoefficientSet pair_set(double eps12) { return ExtremalCoefficientSet(2, {0.0, 1.0, 1.0, eps12}); }

ExtremalCoefficientSet independence_set(std::size_t k) {
  std::vector<double> eps(std::size_t{1} << k);
  for (std::size_t m = 1; m < eps.size(); ++m) eps[m] = std::popcount(static_cast<std::uint32_t>(m));
  return ExtremalCoefficientSet(k, eps);
}

}  // namespace

TEST_CASE("LogisticModel parameter checks", "[models]") {
  CHECK_THROWS_AS(LogisticModel(0.0, 2), RangeError);
  CHECK_THROWS_AS(LogisticModel(1.5, 2), RangeError);
  CHECK_THROWS_AS(LogisticModel(0.5, 1), DimensionError);
  CHECK_NOTHROW(LogisticModel(1e-6, 2));
}

TEST_CASE("logistic_tail_dependence examples", "[models]") {
  CHECK(logistic_tail_dependence({1.0, 2}, UnitTailArgs({1, 1})) == Approx(2.0).epsilon(1e-15));
  CHECK(logistic_tail_dependence({0.5, 2}, UnitTailArgs({1, 1})) == Approx(kSqrt2).epsilon(1e-15));
  CHECK(logistic_tail_dependence({0.5, 2}, UnitTailArgs({2, 2})) ==
        Approx(2.0 * kSqrt2).epsilon(1e-15));
  CHECK_THROWS_AS(UnitTailArgs({1, 0}), RangeError);
  CHECK_THROWS_AS(UnitTailArgs({1, -2}), RangeError);
  CHECK_THROWS_AS(logistic_tail_dependence({0.5, 3}, UnitTailArgs({1, 1})), DimensionError);
  // tiny alpha does not overflow and approaches max(t)
  CHECK(logistic_tail_dependence({1e-6, 3}, UnitTailArgs({3, 2, 1})) == Approx(3.0).epsilon(1e-5));
}

TEST_CASE("logistic_tail_dependence is homogeneous and bounded", "[models][property]") {
  std::mt19937_64 gen(21);
  std::uniform_real_distribution<double> alpha(0.05, 1.0), pos(0.01, 10.0);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t k = 2 + trial % 6;
    const LogisticModel m(alpha(gen), k);
    std::vector<double> t(k);
    for (auto& x : t) x = pos(gen);
    const double c = pos(gen);
    std::vector<double> ct(t);
    for (auto& x : ct) x *= c;
    const double l = logistic_tail_dependence(m, UnitTailArgs(t));
    const double lc = logistic_tail_dependence(m, UnitTailArgs(ct));
    REQUIRE(std::abs(lc - c * l) <= 1e-10 * std::abs(c * l));
    const double top = *std::max_element(t.begin(), t.end());
    double sum = 0.0;
    for (double x : t) sum += x;
    REQUIRE(l >= top * (1.0 - 1e-12));
    REQUIRE(l <= sum * (1.0 + 1e-12));
  }
}

TEST_CASE("logistic_extremal_coefficients examples", "[models]") {
  const auto indep = logistic_extremal_coefficients({1.0, 3});
  for (const auto& s : enumerate_subsets(3, 1)) CHECK(indep[s] == static_cast<double>(s.size()));

  const auto near_total = logistic_extremal_coefficients({1e-3, 2});
  CHECK(near_total[SubsetIndex{0, 1}] == Approx(std::pow(2.0, 1e-3)).epsilon(1e-15));
  CHECK(near_total[SubsetIndex{0, 1}] == Approx(1.00069339).epsilon(1e-8));

  const auto half = logistic_extremal_coefficients({0.5, 3});
  CHECK(half[SubsetIndex{1}] == 1.0);
  CHECK(half[SubsetIndex{0, 2}] == Approx(kSqrt2).epsilon(1e-15));
  CHECK(half[SubsetIndex{0, 1, 2}] == Approx(std::sqrt(3.0)).epsilon(1e-15));

  CHECK_THROWS_AS(logistic_extremal_coefficients({0.5, 21}), DimensionError);
}

TEST_CASE("variogram_from_extremal_coefficients examples", "[models]") {
  CHECK(std::abs(variogram_from_extremal_coefficients(pair_set(2.0))) <= 1e-15);
  CHECK(variogram_from_extremal_coefficients(ExtremalCoefficientSet(3, std::vector<double>(8, 1.0))) ==
        1.0);

  // oracle: v = 1 - 6 nu with nu = l/(1+l) - 1/2 at l = sqrt(2)
  const double oracle = 1.0 - 6.0 * (kSqrt2 / (1.0 + kSqrt2) - 0.5);
  const double v = variogram_from_extremal_coefficients(pair_set(kSqrt2));
  CHECK(std::abs(v - oracle) <= 1e-12);
  CHECK(v == Approx(0.4852813742385703).epsilon(1e-14));
}

TEST_CASE("madogram_from_tail_dependence", "[models]") {
  CHECK(madogram_from_tail_dependence(2.0) == Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(madogram_from_tail_dependence(1.0) == 0.0);
  CHECK(madogram_from_tail_dependence(kSqrt2) == Approx(0.0857864).margin(1e-7));
  CHECK_THROWS_AS(madogram_from_tail_dependence(0.99), RangeError);
  CHECK_THROWS_AS(madogram_from_tail_dependence(2.01), RangeError);
}

TEST_CASE("pairwise_variogram_from_madogram", "[models]") {
  CHECK(std::abs(pairwise_variogram_from_madogram(1.0 / 6.0)) <= 1e-15);
  CHECK(pairwise_variogram_from_madogram(0.0) == 1.0);
  CHECK(pairwise_variogram_from_madogram(0.0857864) == Approx(0.4852814).margin(1e-6));
  CHECK_THROWS_AS(pairwise_variogram_from_madogram(-0.01), RangeError);
  CHECK_THROWS_AS(pairwise_variogram_from_madogram(0.2), RangeError);
}

TEST_CASE("logistic_variogram examples", "[models]") {
  for (std::size_t k = 2; k <= 8; ++k) {
    CHECK(std::abs(logistic_variogram({1.0, k})) <= 1e-14);
    CHECK(logistic_variogram({1e-6, k}) == Approx(1.0).margin(1e-4));
  }
  // frozen from an mpmath quadrature of E(max - min) = int_0^1 P(min <= u) - P(max <= u) du
  CHECK(logistic_variogram({0.5, 3}) == Approx(0.48528137423857029).epsilon(1e-13));
}

TEST_CASE("two pairwise routes agree", "[models][property]") {
  for (int i = 0; i <= 1000; ++i) {
    const double eps = 1.0 + i / 1000.0;
    const double direct = variogram_from_extremal_coefficients(pair_set(eps));
    const double via_nu = pairwise_variogram_from_madogram(madogram_from_tail_dependence(eps));
    REQUIRE(std::abs(direct - via_nu) <= 1e-12);
  }
}

TEST_CASE("endpoint extremal coefficient sets", "[models][property]") {
  for (std::size_t k = 2; k <= 10; ++k) {
    REQUIRE(std::abs(variogram_from_extremal_coefficients(independence_set(k))) <= 1e-14);
    const ExtremalCoefficientSet ones(k, std::vector<double>(std::size_t{1} << k, 1.0));
    REQUIRE(std::abs(variogram_from_extremal_coefficients(ones) - 1.0) <= 1e-14);
  }
}

TEST_CASE("logistic variogram is bounded and decreasing in alpha", "[models][property]") {
  for (std::size_t k = 2; k <= 10; ++k) {
    double previous = 2.0;
    for (int step = 1; step <= 20; ++step) {
      const double v = logistic_variogram({step / 20.0, k});
      REQUIRE(v >= -1e-14);
      REQUIRE(v <= 1.0);
      REQUIRE(v < previous);
      previous = v;
    }
  }
}

TEST_CASE("three exchangeable locations share the pairwise variogram", "[models][property]") {
  // For three points max - min is half the sum of the pairwise distances, so
  // E(range_3) = (3/2) E|U1 - U2| and v(3) = v(2) for exchangeable margins.
  for (int step = 1; step <= 20; ++step) {
    const double a = step / 20.0;
    REQUIRE(std::abs(logistic_variogram({a, 3}) - logistic_variogram({a, 2})) <= 1e-13);
  }
}

TEST_CASE("closed form handles the 20-location cap", "[models]") {
  const double v = logistic_variogram({0.5, 20});
  CHECK(v >= 0.0);
  CHECK(v <= 1.0);
}
