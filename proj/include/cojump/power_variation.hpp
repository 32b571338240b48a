#pragma once

#include "cojump/types.hpp"

namespace cojump {

/// The three test functions driving the statistics: the squared cross
/// product and the two component quartics.
enum class TestFunctionId { prod_sq, quartic_1, quartic_2 };

/// Sum of fn over block increments at stepsize block * delta. Blocks are
/// sums of `block` consecutive fine increments; a trailing partial block is
/// dropped.
double realized_functional(const IncrementSeries& series, TestFunctionId fn, int block = 1);

/// Two-scale ratio statistic for the "common jumps" null. Near 1 when the
/// components jump together; throws denominator_zero when the fine-scale
/// cross variation vanishes (the test is then inapplicable).
double phi_joint(const IncrementSeries& series, int k);

/// Normalized cross statistic for the "disjoint jumps" null, in [0, 1] by
/// Cauchy-Schwarz. Throws denominator_zero when a component shows no
/// variation at all.
double phi_disjoint(const IncrementSeries& series);

}  // namespace cojump
