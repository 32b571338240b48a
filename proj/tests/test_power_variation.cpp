#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "cojump/power_variation.hpp"
#include "cojump/rng.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace cojump;
using test_helpers::make_series;

namespace {

// Naive oracle: straight loop over the fine increments.
double naive_prod_sq(const IncrementSeries& s) {
  double acc = 0.0;
  for (std::size_t i = 0; i < s.count(); ++i) {
    const double p = s.x1(i) * s.x2(i);
    acc += p * p;
  }
  return acc;
}

IncrementSeries random_series(int n, std::uint64_t seed) {
  CounterRng g = RngStream(seed).scalar();
  std::vector<double> x1(n), x2(n);
  for (int i = 0; i < n; ++i) {
    x1[i] = g.normal();
    x2[i] = g.normal() + (g.uniform01() < 0.1 ? 3.0 * g.normal() : 0.0);
  }
  return make_series(0.01, std::move(x1), std::move(x2));
}

}  // namespace

TEST_CASE("grid and series construction contracts") {
  CHECK(SamplingGrid(0.3, 1.0).count == 3);  // floor of 3.33
  CHECK(SamplingGrid(1.0 / 288.0, 1.0).count == 288);
  CHECK(SamplingGrid(0.25, 1.0).count == 4);
  CHECK_THROWS_AS(SamplingGrid(0.0, 1.0), Error);
  CHECK_THROWS_AS(SamplingGrid(0.5, -1.0), Error);
  CHECK_THROWS_AS(SamplingGrid(2.0, 1.0), Error);  // shorter than one step

  // length must match the grid, entries must be finite
  CHECK_THROWS_AS(IncrementSeries(SamplingGrid(0.5, 1.0), {1.0}, {1.0}), Error);
  CHECK_THROWS_AS(IncrementSeries(SamplingGrid(0.5, 1.0), {1.0, 2.0}, {1.0}), Error);
  const double inf = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(IncrementSeries(SamplingGrid(0.5, 1.0), {1.0, inf}, {1.0, 0.0}), Error);
  CHECK_THROWS_AS(IncrementSeries::from_levels(0.5, 1.0, {1.0}, {2.0}, false), Error);
  const IncrementSeries logged =
      IncrementSeries::from_levels(0.5, 1.0, {100.0, 110.0, 99.0}, {1.0, 2.0, 4.0}, true);
  CHECK(logged.x1(0) == doctest::Approx(std::log(1.1)));
  CHECK(logged.x2(1) == doctest::Approx(std::log(2.0)));
}

TEST_CASE("realized_functional worked examples") {
  const IncrementSeries s = make_series(1.0, {1, 0, 2}, {2, 1, 0});
  CHECK(realized_functional(s, TestFunctionId::prod_sq, 1) == doctest::Approx(4.0));
  CHECK(realized_functional(s, TestFunctionId::quartic_1, 1) == doctest::Approx(17.0));
  const IncrementSeries t = make_series(1.0, {1, 1}, {1, 1});
  CHECK(realized_functional(t, TestFunctionId::prod_sq, 2) == doctest::Approx(16.0));
  CHECK_THROWS_AS(realized_functional(t, TestFunctionId::prod_sq, 0), Error);
}

TEST_CASE("realized_functional drops the trailing partial block") {
  const IncrementSeries s = make_series(1.0, {1, 1, 5}, {1, 1, 5});
  // Only one full block of two; the third increment is ignored.
  CHECK(realized_functional(s, TestFunctionId::prod_sq, 2) == doctest::Approx(16.0));
  CHECK(realized_functional(s, TestFunctionId::quartic_2, 3) ==
        doctest::Approx(std::pow(7.0, 4)));
}

TEST_CASE("fine-scale functional equals the naive loop and is permutation invariant") {
  const IncrementSeries s = random_series(400, 1);
  CHECK(realized_functional(s, TestFunctionId::prod_sq, 1) ==
        doctest::Approx(naive_prod_sq(s)).epsilon(1e-13));

  std::vector<double> x1(s.x1s()), x2(s.x2s());
  std::vector<std::size_t> perm(s.count());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  CounterRng g = RngStream(2).scalar();
  for (std::size_t i = perm.size(); i > 1; --i)
    std::swap(perm[i - 1], perm[g.uniform_below(static_cast<std::uint32_t>(i))]);
  std::vector<double> p1(s.count()), p2(s.count());
  for (std::size_t i = 0; i < perm.size(); ++i) {
    p1[i] = x1[perm[i]];
    p2[i] = x2[perm[i]];
  }
  const IncrementSeries shuffled = make_series(0.01, std::move(p1), std::move(p2));
  for (TestFunctionId fn :
       {TestFunctionId::prod_sq, TestFunctionId::quartic_1, TestFunctionId::quartic_2}) {
    CHECK(realized_functional(shuffled, fn, 1) ==
          doctest::Approx(realized_functional(s, fn, 1)).epsilon(1e-12));
  }
}

TEST_CASE("phi_joint worked examples and errors") {
  const IncrementSeries single = make_series(1.0, {1, 0}, {1, 0});
  CHECK(phi_joint(single, 2) == doctest::Approx(1.0));

  const IncrementSeries disjoint = make_series(1.0, {1, 0}, {0, 1});
  CHECK_THROWS_AS(phi_joint(disjoint, 2), Error);
  try {
    phi_joint(disjoint, 2);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::denominator_zero);
  }
  CHECK_THROWS_AS(phi_joint(single, 1), Error);
}

TEST_CASE("phi_disjoint worked examples and errors") {
  CHECK(phi_disjoint(make_series(1.0, {1, 0}, {0, 1})) == doctest::Approx(0.0));
  CHECK(phi_disjoint(make_series(1.0, {1}, {1})) == doctest::Approx(1.0));
  try {
    phi_disjoint(make_series(1.0, {1, 1}, {0, 0}));
    FAIL("expected denominator_zero");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::denominator_zero);
  }
}

TEST_CASE("phi_disjoint on a pure-jump path matches the jump-list formula") {
  // Isolated jumps with zeros elsewhere; evaluate the limit directly.
  const std::vector<std::pair<double, double>> jumps = {
      {0.8, -0.3}, {-1.1, 0.0}, {0.0, 0.9}, {0.4, 0.4}, {-0.2, 0.7}};
  std::vector<double> x1(64, 0.0), x2(64, 0.0);
  for (std::size_t q = 0; q < jumps.size(); ++q) {
    x1[5 + 9 * q] = jumps[q].first;
    x2[5 + 9 * q] = jumps[q].second;
  }
  double b = 0, b11 = 0, b22 = 0;
  for (const auto& [a, c] : jumps) {
    b += a * a * c * c;
    b11 += a * a * a * a;
    b22 += c * c * c * c;
  }
  const IncrementSeries s = make_series(1.0 / 64, std::move(x1), std::move(x2));
  CHECK(phi_disjoint(s) == doctest::Approx(b / std::sqrt(b11 * b22)).epsilon(1e-12));
}

TEST_CASE("scale invariance of both statistics") {
  CounterRng g = RngStream(3).scalar();
  for (int trial = 0; trial < 50; ++trial) {
    const IncrementSeries s = random_series(300, 100 + trial);
    const double l1 = std::exp(g.uniform01() * std::log(100.0) + std::log(0.1));
    const double l2 = std::exp(g.uniform01() * std::log(100.0) + std::log(0.1));
    std::vector<double> x1(s.count()), x2(s.count());
    for (std::size_t i = 0; i < s.count(); ++i) {
      x1[i] = l1 * s.x1(i);
      x2[i] = l2 * s.x2(i);
    }
    const IncrementSeries scaled = make_series(0.01, std::move(x1), std::move(x2));
    CHECK(phi_joint(scaled, 2) == doctest::Approx(phi_joint(s, 2)).epsilon(1e-12));
    CHECK(phi_joint(scaled, 3) == doctest::Approx(phi_joint(s, 3)).epsilon(1e-12));
    CHECK(phi_disjoint(scaled) == doctest::Approx(phi_disjoint(s)).epsilon(1e-12));
  }
}

TEST_CASE("phi_disjoint always lies in [0, 1]") {
  for (int trial = 0; trial < 100; ++trial) {
    const IncrementSeries s = random_series(50 + 7 * trial % 200, 500 + trial);
    const double v = phi_disjoint(s);
    CHECK(v >= 0.0);
    CHECK(v <= 1.0 + 1e-12);
  }
}
