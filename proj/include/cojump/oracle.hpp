#pragma once

#include <vector>

#include "cojump/rng.hpp"
#include "cojump/simulator.hpp"

namespace cojump {

/// Asymptotic quantities computed directly from simulated ground truth; the
/// reference values the estimators are checked against.
struct LimitQuantities {
  double b = 0.0;       // sum of squared cross jump products
  double b11 = 0.0;     // sum of fourth powers, component 1
  double b22 = 0.0;     // sum of fourth powers, component 2
  double c = 0.0;       // integral of c11 c22 + 2 c12^2
  double f = 0.0;       // jump-diffusion interaction, level one
  double fprime = 0.0;  // jump-diffusion interaction, level two
};

LimitQuantities limit_quantities(const PathTruth& truth, double horizon);

/// One draw from the conditional limit laws of the two statistics.
struct LimitLawSample {
  double phi_tilde = 0.0;    // limit of the two-scale ratio off the joint set
  double g_tilde = 0.0;      // centered limit driving the joint test
  double d_tilde = 0.0;      // nonnegative limit driving the disjoint test
  double d_tilde_pp = 0.0;   // coarse-scale companion of d_tilde
};

/// Per-jump data that stays fixed across draws.
struct LimitLawPlan {
  struct Jump {
    double j1 = 0.0, j2 = 0.0;
    Sym2 root_left, root_right;
  };
  std::vector<Jump> jumps;
  double c = 0.0;
  int k = 2;
};

LimitLawPlan make_limit_law_plan(const PathTruth& truth, double horizon, int k);
LimitLawSample sample_limit_law(const LimitLawPlan& plan, CounterRng& rng);
LimitLawSample sample_limit_law(const PathTruth& truth, double horizon, int k, CounterRng& rng);

}  // namespace cojump
