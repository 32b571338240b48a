#pragma once

#include <cmath>
#include <vector>

#include "cojump/rng.hpp"
#include "cojump/types.hpp"

namespace test_helpers {

inline cojump::IncrementSeries make_series(double delta, std::vector<double> x1,
                                           std::vector<double> x2) {
  return cojump::IncrementSeries::from_increments(delta, std::move(x1), std::move(x2));
}

/// Correlated arithmetic Brownian increments with constant covariance
/// [[v1, rho*sqrt(v1 v2)], [.., v2]] over [0, horizon].
inline cojump::IncrementSeries brownian_series(int n, double horizon, double v1, double v2,
                                               double rho, cojump::CounterRng& g) {
  const double delta = horizon / n;
  const double s1 = std::sqrt(v1 * delta);
  const double s2 = std::sqrt(v2 * delta);
  const double root = std::sqrt(std::max(0.0, 1.0 - rho * rho));
  std::vector<double> x1(static_cast<std::size_t>(n)), x2(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double z1 = g.normal();
    const double z2 = g.normal();
    x1[static_cast<std::size_t>(i)] = s1 * z1;
    x2[static_cast<std::size_t>(i)] = s2 * (rho * z1 + root * z2);
  }
  return make_series(delta, std::move(x1), std::move(x2));
}

inline double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace test_helpers
