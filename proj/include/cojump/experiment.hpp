#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cojump/csv.hpp"
#include "cojump/simulator.hpp"
#include "cojump/testing.hpp"

namespace cojump {

/// Batch Monte-Carlo run: a scenario, a grid of sample sizes and levels, and
/// the cutoff rules to evaluate on every kept replication.
struct ExperimentSpec {
  ScenarioConfig scenario;
  std::string scenario_name;  // preset id when one was used, for labeling
  std::vector<int> n_obs_list{100, 1600};
  int replications = 1000;
  std::vector<double> levels{0.01, 0.05, 0.10};
  TestConfig test;
  std::vector<JointMethod> joint_methods{JointMethod::simulated};
  std::vector<DisjointMethod> disjoint_methods{DisjointMethod::simulated};
  CEstimator c_estimator = CEstimator::multipower;
  std::uint64_t seed = 12345;
  std::set<PathClass> keep;  // empty keeps every path class
  int max_attempt_factor = 50;

  void validate() const;
};

/// Parse the flat sectioned key = value format ([scenario], [experiment],
/// [test]); later keys override earlier ones.
ExperimentSpec parse_experiment_config(const std::string& text);

/// Inverse of the parser: emit config text that reproduces the spec (the
/// experiment writer drops a copy of it next to its outputs).
std::string scenario_to_config(const ScenarioConfig& cfg);
std::string experiment_to_config(const ExperimentSpec& spec);

struct RejectionTable {
  std::string side;    // "joint" or "disjoint"
  std::string method;
  std::vector<double> levels;
  std::vector<int> n_obs;
  std::vector<std::vector<double>> rate;  // [level][n_obs]
};

struct PhiSample {
  int n_obs = 0;
  int replication = 0;
  double phi_joint = 0.0;
  double phi_disjoint = 0.0;
  double limit_phi_disjoint = 0.0;  // oracle value from the path truth
  PathClass path_class = PathClass::continuous_any;
};

struct ExperimentResult {
  ExperimentSpec spec;
  std::vector<RejectionTable> tables;
  std::vector<PhiSample> samples;
  std::vector<int> kept;      // per n_obs
  std::vector<int> attempts;  // per n_obs
};

/// Deterministic for a fixed spec and seed regardless of `threads` (0 uses
/// the hardware count): replication streams are keyed by attempt index and
/// screening consumes attempts in order.
ExperimentResult run_experiment(const ExperimentSpec& spec, int threads = 0);

/// rejection_<side>_<method>.csv grids plus one sample dump per statistic.
void write_experiment_csvs(const ExperimentResult& result, const std::string& out_dir);

struct AnalyzeOptions {
  TestConfig test;
  JointMethod joint_method = JointMethod::simulated;
  DisjointMethod disjoint_method = DisjointMethod::simulated;
  CEstimator c_estimator = CEstimator::multipower;
  double prefilter_level = 0.01;  // <= 0 disables the univariate screen
  bool calibrate_truncation = true;  // per-component 3 * sqrt(BV/T) * delta^0.49
  std::uint64_t seed = 12345;
};

struct DayReportRow {
  std::string date;
  double phi_d = 0.0, phi_j = 0.0, p_d = 0.0, p_j = 0.0;
  int category = 0;
  std::string status;  // empty when the row carries statistics
  bool ok = false;
};

std::vector<DayReportRow> analyze_days(const std::vector<DayRecord>& days,
                                       const AnalyzeOptions& options);

std::string day_report_header();
std::string format_day_row(const DayReportRow& row);
void write_day_report(const std::vector<DayReportRow>& rows, std::ostream& out);

int category_from_pvalues(double p_d, double p_j, double level);

}  // namespace cojump
