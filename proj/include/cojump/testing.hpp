#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "cojump/estimators.hpp"
#include "cojump/resampling.hpp"

namespace cojump {

enum class JointMethod { normal, chebyshev, simulated, normal_truncated, chebyshev_truncated };
enum class DisjointMethod { markov, simulated };
enum class CEstimator { multipower, truncated };
enum class Decision { retain, reject, inapplicable };

const char* to_string(JointMethod m);
const char* to_string(DisjointMethod m);
const char* to_string(Decision d);
JointMethod joint_method_from_string(const std::string& s);
DisjointMethod disjoint_method_from_string(const std::string& s);
CEstimator c_estimator_from_string(const std::string& s);

/// Deterministic cutoff floor for the truncated joint variants; guarantees
/// power against the disjoint alternative.
struct PowerGuard {
  double alpha_prime = 0.0;
  double varpi_prime = 0.0;
};

struct TestConfig {
  int k = 2;
  double level = 0.05;
  TruncationSpec trunc;  // joint-norm 0.03 * delta^0.49 by default
  int window = 0;        // k_n; 0 resolves to round(1 / sqrt(delta))
  int n_draws = 0;       // 0 resolves to min(20000, ceil(1000 / level))
  std::optional<PowerGuard> power_guard;

  WindowSpec resolve_window(const SamplingGrid& grid) const;
  int resolve_draws() const;
  void validate() const;
};

struct StatReport {
  double phi_joint = std::numeric_limits<double>::quiet_NaN();
  double phi_disjoint = std::numeric_limits<double>::quiet_NaN();
  StandardizerReport scales;
  Decision joint_decision = Decision::inapplicable;
  Decision disjoint_decision = Decision::inapplicable;
  std::optional<double> p_joint, p_disjoint;
  double joint_cutoff = std::numeric_limits<double>::quiet_NaN();
  double disjoint_cutoff = std::numeric_limits<double>::quiet_NaN();
  double t_joint = std::numeric_limits<double>::quiet_NaN();    // (phi_j - 1) / v_joint
  double t_disjoint = std::numeric_limits<double>::quiet_NaN(); // phi_d / v_disjoint
  int category = 0;  // 1..4 when both tests applicable, else 0
  std::string note;
};

/// z with P(|N(0,1)| >= z) = level.
double z_alpha(double level);

/// Inputs shared by every joint-side cutoff rule. `g_abs_sorted` (absolute
/// copies, largest first) is only needed for the simulated method.
struct JointSideInputs {
  double phi = std::numeric_limits<double>::quiet_NaN();
  double v_f = 0.0;
  double delta = 0.0;
  std::optional<double> v_joint;
  const std::vector<double>* g_abs_sorted = nullptr;
  std::optional<PowerGuard> guard;
};

struct DisjointSideInputs {
  double phi = std::numeric_limits<double>::quiet_NaN();
  double vg_root = 0.0;  // sqrt(V(g1) V(g2))
  double delta = 0.0;
  std::optional<double> v_disjoint, v_disjoint_trunc;
  std::optional<double> a_hat;
  double a_hat_trunc = 0.0;
  const std::vector<double>* d_sorted = nullptr;
};

struct SideOutcome {
  Decision decision = Decision::inapplicable;
  std::optional<double> p_value;
  double cutoff = std::numeric_limits<double>::quiet_NaN();
};

SideOutcome decide_joint(const JointSideInputs& in, JointMethod method, double level);
SideOutcome decide_disjoint(const DisjointSideInputs& in, DisjointMethod method,
                            CEstimator estimator, double level);

/// Cutoff value of the selected rule; throws when a prerequisite is missing.
double joint_cutoff(const IncrementSeries& series, const TestConfig& cfg, JointMethod method,
                    const RngStream& stream);
double disjoint_cutoff(const IncrementSeries& series, const TestConfig& cfg,
                       DisjointMethod method, CEstimator estimator, const RngStream& stream);

/// Both tests end to end: raw statistics, standardizers, shared resampling
/// copy sets, decisions, p-values, and the four-way outcome category.
StatReport run_tests(const IncrementSeries& series, const TestConfig& cfg, JointMethod jm,
                     DisjointMethod dm, CEstimator estimator, const RngStream& stream);

/// 1 = common arrival confirmed, 2 = disjoint confirmed, 3 = neither null
/// rejected, 4 = both rejected; 0 when either side is inapplicable.
int category_from(Decision joint, Decision disjoint);

/// Jump-robust integrated variance proxy for one component (1 or 2).
double bipower_variation(const IncrementSeries& series, int component);

enum class PrefilterResult { jump, no_jump };

/// Studentized log ratio of realized variance to bipower variation for one
/// component; screens days without jumps before the pair tests run.
PrefilterResult univariate_jump_prefilter(const IncrementSeries& series, int component,
                                          double level);

}  // namespace cojump
