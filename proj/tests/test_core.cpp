#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <random>
#include <set>

#include "maxdep/core.hpp"

using namespace maxdep;

TEST_CASE("validate_table accepts a minimal 2x2 table", "[core]") {
  const auto t = validate_table({"A", "B"}, {{1, 2}, {3, 4}});
  CHECK(t.n() == 2);
  CHECK(t.k() == 2);
  CHECK(t(1, 0) == 3.0);
  CHECK(t.locations()[1].label() == "B");
}

TEST_CASE("validate_table rejects bad shapes and values", "[core]") {
  CHECK_THROWS_AS(validate_table({"A"}, {{1}, {2}, {3}}), DimensionError);
  CHECK_THROWS_AS(validate_table({"A", "B"}, {{1, 2}}), DimensionError);
  CHECK_THROWS_AS(validate_table({"A", "B"}, {{1, 2}, {3}}), DimensionError);
  CHECK_THROWS_AS(validate_table({"A", "A"}, {{1, 2}, {3, 4}}), DuplicateLabelError);
  CHECK_THROWS_AS(validate_table({"A", ""}, {{1, 2}, {3, 4}}), InvariantError);

  const double nan = std::numeric_limits<double>::quiet_NaN();
  try {
    validate_table({"A", "B"}, {{1, 2}, {nan, 4}});
    FAIL("expected NonFiniteError");
  } catch (const NonFiniteError& e) {
    CHECK(e.row() == 1);
    CHECK(e.col() == 0);
  }
  CHECK_THROWS_AS(validate_table({"A", "B"}, {{1, std::numeric_limits<double>::infinity()}, {3, 4}}),
                  NonFiniteError);
}

TEST_CASE("table construction round-trips finite values", "[core][property]") {
  std::mt19937_64 gen(42);
  std::uniform_int_distribution<int> dim(2, 8);
  std::normal_distribution<double> val(0.0, 1e3);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = dim(gen), k = dim(gen);
    std::vector<std::string> labels;
    for (int j = 0; j < k; ++j) labels.push_back("c" + std::to_string(j));
    std::vector<std::vector<double>> rows(n, std::vector<double>(k));
    for (auto& r : rows)
      for (auto& x : r) x = val(gen);
    const auto t = validate_table(labels, rows);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < k; ++j) REQUIRE(t(i, j) == rows[i][j]);
  }
}

TEST_CASE("enumerate_subsets orders by size then lexicographically", "[core]") {
  const auto k2 = enumerate_subsets(2, 1);
  REQUIRE(k2.size() == 3);
  CHECK(k2[0] == SubsetIndex{0});
  CHECK(k2[1] == SubsetIndex{1});
  CHECK(k2[2] == SubsetIndex({0, 1}));

  const auto k3 = enumerate_subsets(3, 2);
  const std::vector<SubsetIndex> expected{{0, 1}, {0, 2}, {1, 2}, {0, 1, 2}};
  CHECK(k3 == expected);

  const auto k4 = enumerate_subsets(4, 2);
  const std::vector<SubsetIndex> pairs4{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
  CHECK(std::vector<SubsetIndex>(k4.begin(), k4.begin() + 6) == pairs4);

  CHECK_THROWS_AS(enumerate_subsets(21, 1), DimensionError);
  CHECK_THROWS_AS(enumerate_subsets(4, 0), RangeError);
  CHECK_THROWS_AS(enumerate_subsets(4, 5), RangeError);
}

TEST_CASE("enumerate_subsets yields 2^k - 1 distinct sorted subsets", "[core][property]") {
  for (std::size_t k = 2; k <= 12; ++k) {
    const auto all = enumerate_subsets(k, 1);
    REQUIRE(all.size() == (std::size_t{1} << k) - 1);
    REQUIRE(std::is_sorted(all.begin(), all.end()));
    std::set<std::uint32_t> masks;
    for (const auto& s : all) masks.insert(s.mask());
    REQUIRE(masks.size() == all.size());
  }
}

TEST_CASE("SubsetIndex normalizes and validates members", "[core]") {
  const SubsetIndex s{2, 0};
  CHECK(s[0] == 0);
  CHECK(s[1] == 2);
  CHECK(s.mask() == 0b101u);
  CHECK_THROWS_AS(SubsetIndex(std::vector<std::size_t>{}), InvariantError);
  CHECK_THROWS_AS((SubsetIndex{1, 1}), InvariantError);
  CHECK_THROWS_AS(s.check_against(2), DimensionError);
  CHECK_NOTHROW(s.check_against(3));
}

namespace {

std::vector<double> independence_masks(std::size_t k) {
  std::vector<double> eps(std::size_t{1} << k);
  for (std::size_t m = 1; m < eps.size(); ++m) eps[m] = std::popcount(static_cast<std::uint32_t>(m));
  return eps;
}

}  // namespace

TEST_CASE("ExtremalCoefficientSet enforces its invariants", "[core]") {
  CHECK_NOTHROW(ExtremalCoefficientSet(3, independence_masks(3)));
  CHECK_NOTHROW(ExtremalCoefficientSet(3, std::vector<double>(8, 1.0)));

  auto bad_singleton = independence_masks(3);
  bad_singleton[0b010] = 1.1;
  CHECK_THROWS_AS(ExtremalCoefficientSet(3, bad_singleton), InvariantError);

  auto too_big = independence_masks(3);
  too_big[0b011] = 2.5;
  CHECK_THROWS_AS(ExtremalCoefficientSet(3, too_big), InvariantError);

  auto below_one = std::vector<double>(8, 1.0);
  below_one[0b111] = 0.9;
  CHECK_THROWS_AS(ExtremalCoefficientSet(3, below_one), InvariantError);

  // pair {1,2} larger than the full set
  auto not_monotone = std::vector<double>(8, 1.0);
  not_monotone[0b011] = 1.8;
  not_monotone[0b111] = 1.5;
  CHECK_THROWS_AS(ExtremalCoefficientSet(3, not_monotone), InvariantError);

  CHECK_THROWS_AS(ExtremalCoefficientSet(3, std::vector<double>(7, 1.0)), InvariantError);
  CHECK_THROWS_AS(ExtremalCoefficientSet(21, {}), DimensionError);

  const ExtremalCoefficientSet eps(3, independence_masks(3));
  CHECK(eps[SubsetIndex{0, 2}] == 2.0);
  CHECK(eps.full() == 3.0);
}

TEST_CASE("finite-sample floor of the variogram estimator", "[core]") {
  CHECK(variogram_finite_sample_floor(2, 2) == Catch::Approx(-0.5));
  CHECK(variogram_finite_sample_floor(3, 4) == Catch::Approx(1.0 - 2.0 * 0.75));
}
