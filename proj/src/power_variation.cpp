#include "cojump/power_variation.hpp"

#include <cmath>

namespace cojump {

namespace {

inline double eval(TestFunctionId fn, double u1, double u2) {
  switch (fn) {
    case TestFunctionId::prod_sq: {
      const double p = u1 * u2;
      return p * p;
    }
    case TestFunctionId::quartic_1: {
      const double s = u1 * u1;
      return s * s;
    }
    case TestFunctionId::quartic_2: {
      const double s = u2 * u2;
      return s * s;
    }
  }
  return 0.0;
}

}  // namespace

double realized_functional(const IncrementSeries& series, TestFunctionId fn, int block) {
  if (block < 1) fail(Errc::invalid_argument, "realized_functional: block must be >= 1");
  const std::size_t k = static_cast<std::size_t>(block);
  const std::size_t blocks = series.count() / k;
  double acc = 0.0;
  for (std::size_t b = 0; b < blocks; ++b) {
    double u1 = 0.0, u2 = 0.0;
    for (std::size_t j = b * k; j < (b + 1) * k; ++j) {
      u1 += series.x1(j);
      u2 += series.x2(j);
    }
    acc += eval(fn, u1, u2);
  }
  return acc;
}

double phi_joint(const IncrementSeries& series, int k) {
  if (k < 2) fail(Errc::invalid_argument, "phi_joint: k must be >= 2");
  const double fine = realized_functional(series, TestFunctionId::prod_sq, 1);
  if (fine == 0.0)
    fail(Errc::denominator_zero, "phi_joint: no cross variation at the fine scale");
  return realized_functional(series, TestFunctionId::prod_sq, k) / fine;
}

double phi_disjoint(const IncrementSeries& series) {
  const double g1 = realized_functional(series, TestFunctionId::quartic_1, 1);
  const double g2 = realized_functional(series, TestFunctionId::quartic_2, 1);
  if (g1 == 0.0 || g2 == 0.0)
    fail(Errc::denominator_zero, "phi_disjoint: a component shows no variation");
  const double fine = realized_functional(series, TestFunctionId::prod_sq, 1);
  return fine / (std::sqrt(g1) * std::sqrt(g2));
}

}  // namespace cojump
