// Command-line front end; talks to the library exclusively through the C API.
#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cojump.h"

namespace {

int exit_code_for(cj_status status) {
  switch (status) {
    case CJ_OK:
      return 0;
    case CJ_ERR_INVALID_ARGUMENT:
    case CJ_ERR_MISSING_POWER_GUARD:
    case CJ_ERR_DEGENERATE_CONFIG:
    case CJ_ERR_INSUFFICIENT_DRAWS:
      return 1;  // configuration problems
    default:
      return 2;  // data problems
  }
}

int report_failure(const char* what, cj_status status) {
  std::fprintf(stderr, "error: %s: %s (%s)\n", what, cj_last_error(), cj_status_name(status));
  return exit_code_for(status);
}

struct CommonTestFlags {
  int k = 2;
  double level = 0.05;
  double alpha = 0.03;
  double alpha2 = -1.0;
  double varpi = 0.49;
  int kn = 0;
  int draws = 0;
  double power_alpha = 0.0;
  double power_varpi = 0.0;
  std::string method_joint = "simulated";
  std::string method_disjoint = "simulated";
  std::string c_estimator = "multipower";
  std::string trunc_mode = "auto";  // auto = per-day bipower calibration
  std::uint64_t seed = 12345;

  void attach(CLI::App* app) {
    app->add_option("--k", k, "coarse block scale (>= 2)");
    app->add_option("--level", level, "significance level");
    app->add_option("--alpha", alpha, "truncation alpha");
    app->add_option("--alpha2", alpha2, "per-component truncation alpha for x2");
    app->add_option("--varpi", varpi, "truncation exponent");
    app->add_option("--kn", kn, "spot window width (0 = auto)");
    app->add_option("--draws", draws, "resampling copies (0 = auto)");
    app->add_option("--power-alpha", power_alpha, "power-guard alpha'");
    app->add_option("--power-varpi", power_varpi, "power-guard varpi'");
    app->add_option("--method-joint", method_joint,
                    "normal|chebyshev|simulated|normal_truncated|chebyshev_truncated");
    app->add_option("--method-disjoint", method_disjoint, "markov|simulated");
    app->add_option("--c-estimator", c_estimator, "multipower|truncated");
    app->add_option("--trunc", trunc_mode, "auto (bipower-calibrated) or manual");
    app->add_option("--seed", seed, "random seed");
  }

  cj_test_config config() const {
    cj_test_config cfg;
    cj_test_config_default(&cfg);
    cfg.k = k;
    cfg.level = level;
    cfg.trunc_alpha = alpha;
    cfg.trunc_alpha2 = alpha2;
    cfg.trunc_varpi = varpi;
    cfg.window = kn;
    cfg.n_draws = draws;
    if (power_alpha > 0.0 && power_varpi > 0.0) {
      cfg.has_power_guard = 1;
      cfg.power_alpha = power_alpha;
      cfg.power_varpi = power_varpi;
    }
    return cfg;
  }

  bool parse_methods(cj_joint_method& jm, cj_disjoint_method& dm, cj_c_estimator& ce) const {
    if (method_joint == "normal") jm = CJ_JOINT_NORMAL;
    else if (method_joint == "chebyshev") jm = CJ_JOINT_CHEBYSHEV;
    else if (method_joint == "simulated") jm = CJ_JOINT_SIMULATED;
    else if (method_joint == "normal_truncated") jm = CJ_JOINT_NORMAL_TRUNCATED;
    else if (method_joint == "chebyshev_truncated") jm = CJ_JOINT_CHEBYSHEV_TRUNCATED;
    else return false;
    if (method_disjoint == "markov") dm = CJ_DISJOINT_MARKOV;
    else if (method_disjoint == "simulated") dm = CJ_DISJOINT_SIMULATED;
    else return false;
    if (c_estimator == "multipower") ce = CJ_C_MULTIPOWER;
    else if (c_estimator == "truncated") ce = CJ_C_TRUNCATED;
    else return false;
    return true;
  }
};

struct InputFlags {
  std::string input;
  std::string format = "returns";
  int col_day = 0;
  int col_time = -1;
  int col_x1 = 1;
  int col_x2 = 2;
  bool no_header = false;

  void attach(CLI::App* app, bool with_day) {
    app->add_option("--input", input, "input CSV path")->required();
    app->add_option("--format", format, "levels|log_levels|returns");
    if (with_day) app->add_option("--col-day", col_day, "day key column (0-based)");
    app->add_option("--col-time", col_time, "time column (-1 = none)");
    app->add_option("--col-x1", col_x1, "component 1 column");
    app->add_option("--col-x2", col_x2, "component 2 column");
    app->add_flag("--no-header", no_header, "input has no header row");
  }

  cj_series_format parsed_format(bool& ok) const {
    ok = true;
    if (format == "levels") return CJ_FORMAT_LEVELS;
    if (format == "log_levels" || format == "log-levels") return CJ_FORMAT_LOG_LEVELS;
    if (format == "returns") return CJ_FORMAT_RETURNS;
    ok = false;
    return CJ_FORMAT_RETURNS;
  }
};

// Minimal single-series reader for `test`: numeric columns, one series.
bool read_single_series(const InputFlags& in, std::vector<double>& x1, std::vector<double>& x2,
                        std::string& err) {
  std::ifstream file(in.input);
  if (!file) {
    err = "cannot open '" + in.input + "'";
    return false;
  }
  std::string line;
  bool skip = !in.no_header;
  std::size_t row = 0;
  while (std::getline(file, line)) {
    ++row;
    if (skip) {
      skip = false;
      continue;
    }
    if (line.empty() || line == "\r") continue;
    std::vector<std::string> fields;
    std::string cur;
    for (char ch : line) {
      if (ch == ',') {
        fields.push_back(cur);
        cur.clear();
      } else if (ch != '\r') {
        cur.push_back(ch);
      }
    }
    fields.push_back(cur);
    const int need = std::max(in.col_x1, in.col_x2);
    if (static_cast<int>(fields.size()) <= need) {
      err = "row " + std::to_string(row) + ": too few columns";
      return false;
    }
    try {
      x1.push_back(std::stod(fields[static_cast<std::size_t>(in.col_x1)]));
      x2.push_back(std::stod(fields[static_cast<std::size_t>(in.col_x2)]));
    } catch (const std::exception&) {
      err = "row " + std::to_string(row) + ": bad number";
      return false;
    }
  }
  if (x1.empty()) {
    err = "no data rows";
    return false;
  }
  return true;
}

int cmd_simulate(const std::string& preset, int n_obs, int reps, std::uint64_t seed,
                 const std::string& out_prefix) {
  cj_scenario scenario;
  cj_status st = cj_scenario_preset(preset.c_str(), &scenario);
  if (st != CJ_OK) return report_failure("simulate", st);
  std::ofstream index(out_prefix + "_index.csv");
  if (!index) {
    std::fprintf(stderr, "error: cannot write %s_index.csv\n", out_prefix.c_str());
    return 2;
  }
  index << "replication,class,n_jumps\n";
  const char* class_names[] = {"joint", "disjoint", "continuous"};
  for (int rep = 0; rep < reps; ++rep) {
    cj_series* series = nullptr;
    cj_truth* truth = nullptr;
    st = cj_simulate_path(&scenario, n_obs, seed + static_cast<std::uint64_t>(rep), &series,
                          &truth);
    if (st != CJ_OK) return report_failure("simulate", st);
    const std::string path_name = out_prefix + "_path" + std::to_string(rep) + ".csv";
    const std::string truth_name = out_prefix + "_truth" + std::to_string(rep) + ".csv";
    std::ofstream path(path_name), truth_file(truth_name);
    if (!path || !truth_file) {
      std::fprintf(stderr, "error: cannot write outputs for replication %d\n", rep);
      cj_series_free(series);
      cj_truth_free(truth);
      return 2;
    }
    path << "time,dx1,dx2\n";
    const double delta = cj_series_delta(series);
    char buf[128];
    for (size_t i = 0; i < cj_series_count(series); ++i) {
      double dx1 = 0, dx2 = 0;
      cj_series_increment(series, i, &dx1, &dx2);
      std::snprintf(buf, sizeof buf, "%.10g,%.12g,%.12g\n",
                    delta * static_cast<double>(i + 1), dx1, dx2);
      path << buf;
    }
    truth_file << "time,source,mark,jump1,jump2\n";
    for (size_t q = 0; q < cj_truth_jump_count(truth); ++q) {
      double t = 0, mark = 0, j1 = 0, j2 = 0;
      int source = 0;
      cj_truth_jump(truth, q, &t, &source, &mark, &j1, &j2);
      std::snprintf(buf, sizeof buf, "%.10g,%d,%.12g,%.12g,%.12g\n", t, source, mark, j1, j2);
      truth_file << buf;
    }
    index << rep << "," << class_names[cj_truth_class(truth)] << ","
          << cj_truth_jump_count(truth) << "\n";
    cj_series_free(series);
    cj_truth_free(truth);
  }
  std::printf("wrote %d replication(s) to %s_*\n", reps, out_prefix.c_str());
  return 0;
}

int cmd_test(const InputFlags& in, const CommonTestFlags& flags, double horizon) {
  cj_joint_method jm;
  cj_disjoint_method dm;
  cj_c_estimator ce;
  if (!flags.parse_methods(jm, dm, ce)) {
    std::fprintf(stderr, "error: unknown method name\n");
    return 1;
  }
  std::vector<double> c1, c2;
  std::string err;
  if (!read_single_series(in, c1, c2, err)) {
    std::fprintf(stderr, "error: %s\n", err.c_str());
    return 2;
  }
  bool format_ok = true;
  const cj_series_format format = in.parsed_format(format_ok);
  if (!format_ok) {
    std::fprintf(stderr, "error: unknown format '%s'\n", in.format.c_str());
    return 1;
  }
  cj_series* series = nullptr;
  cj_status st;
  if (format == CJ_FORMAT_RETURNS) {
    st = cj_series_create(horizon / static_cast<double>(c1.size()), c1.data(), c2.data(),
                          c1.size(), &series);
  } else {
    st = cj_series_from_levels(horizon / static_cast<double>(c1.size() - 1), horizon, c1.data(),
                               c2.data(), c1.size(), format == CJ_FORMAT_LOG_LEVELS ? 1 : 0,
                               &series);
  }
  if (st != CJ_OK) return report_failure("test", st);

  cj_test_config cfg = flags.config();
  if (flags.trunc_mode == "auto") {
    // Per-component thresholds 3 * sqrt(BV/T) * delta^0.49 from the data.
    double bv1 = 0.0, bv2 = 0.0;
    const size_t n = cj_series_count(series);
    double prev1 = 0.0, prev2 = 0.0;
    for (size_t i = 0; i < n; ++i) {
      double dx1 = 0, dx2 = 0;
      cj_series_increment(series, i, &dx1, &dx2);
      if (i > 0) {
        bv1 += std::abs(dx1) * std::abs(prev1);
        bv2 += std::abs(dx2) * std::abs(prev2);
      }
      prev1 = dx1;
      prev2 = dx2;
    }
    const double pi_half = 1.5707963267948966;
    bv1 *= pi_half;
    bv2 *= pi_half;
    if (bv1 > 0.0 && bv2 > 0.0) {
      cfg.trunc_alpha = 3.0 * std::sqrt(bv1 / horizon);
      cfg.trunc_alpha2 = 3.0 * std::sqrt(bv2 / horizon);
      cfg.trunc_varpi = 0.49;
    }
  }

  cj_report* report = nullptr;
  st = cj_run_tests(series, &cfg, jm, dm, ce, flags.seed, &report);
  cj_series_free(series);
  if (st != CJ_OK) return report_failure("test", st);

  const char* decision_names[] = {"retain", "reject", "inapplicable"};
  std::printf("phi_joint      %.6f\n", cj_report_phi_joint(report));
  std::printf("phi_disjoint   %.6f\n", cj_report_phi_disjoint(report));
  std::printf("joint test     %s", decision_names[cj_report_joint_decision(report)]);
  if (cj_report_p_joint(report) >= 0.0) std::printf("  p=%.4f", cj_report_p_joint(report));
  std::printf("  cutoff=%.6g\n", cj_report_value(report, CJ_FIELD_JOINT_CUTOFF));
  std::printf("disjoint test  %s", decision_names[cj_report_disjoint_decision(report)]);
  if (cj_report_p_disjoint(report) >= 0.0) std::printf("  p=%.4f", cj_report_p_disjoint(report));
  std::printf("  cutoff=%.6g\n", cj_report_value(report, CJ_FIELD_DISJOINT_CUTOFF));
  std::printf("category       %d\n", cj_report_category(report));
  std::printf("v_joint=%.6g v_disjoint=%.6g f_hat=%.6g fprime_hat=%.6g a_hat=%.6g\n",
              cj_report_value(report, CJ_FIELD_V_JOINT),
              cj_report_value(report, CJ_FIELD_V_DISJOINT),
              cj_report_value(report, CJ_FIELD_F_HAT),
              cj_report_value(report, CJ_FIELD_FPRIME_HAT),
              cj_report_value(report, CJ_FIELD_A_HAT));
  cj_report_free(report);
  return 0;
}

int cmd_experiment(const std::string& config_path, const std::string& preset,
                   const std::string& overrides, const std::string& out_dir, int threads) {
  std::string text;
  if (!config_path.empty()) {
    std::ifstream file(config_path);
    if (!file) {
      std::fprintf(stderr, "error: cannot open config '%s'\n", config_path.c_str());
      return 1;
    }
    std::ostringstream buffer;
    buffer << file.rdbuf();
    text = buffer.str();
  }
  if (!preset.empty()) text += "\n[scenario]\npreset = " + preset + "\n";
  text += overrides;
  const cj_status st = cj_experiment_run(text.c_str(), out_dir.c_str(), threads);
  if (st != CJ_OK) return report_failure("experiment", st);
  std::printf("experiment outputs written to %s\n", out_dir.c_str());
  return 0;
}

int cmd_analyze(const InputFlags& in, const CommonTestFlags& flags, double prefilter_level,
                const std::string& out_csv) {
  cj_analyze_config cfg;
  cj_analyze_config_default(&cfg);
  bool format_ok = true;
  cfg.format = in.parsed_format(format_ok);
  if (!format_ok) {
    std::fprintf(stderr, "error: unknown format '%s'\n", in.format.c_str());
    return 1;
  }
  cfg.col_day = in.col_day;
  cfg.col_time = in.col_time;
  cfg.col_x1 = in.col_x1;
  cfg.col_x2 = in.col_x2;
  cfg.has_header = in.no_header ? 0 : 1;
  cfg.test = flags.config();
  if (!flags.parse_methods(cfg.joint_method, cfg.disjoint_method, cfg.c_estimator)) {
    std::fprintf(stderr, "error: unknown method name\n");
    return 1;
  }
  cfg.prefilter_level = prefilter_level;
  cfg.calibrate_truncation = flags.trunc_mode == "auto" ? 1 : 0;
  cfg.seed = flags.seed;
  const cj_status st = cj_analyze_file(in.input.c_str(), &cfg, out_csv.c_str());
  if (st != CJ_OK) return report_failure("analyze", st);
  std::printf("day report written to %s\n", out_csv.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tests for common vs disjoint jump arrival in bivariate high-frequency series"};
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand("simulate", "generate scenario paths with ground truth");
  std::string sim_preset = "I-j";
  int sim_n_obs = 1600, sim_reps = 1;
  std::uint64_t sim_seed = 12345;
  std::string sim_out = "sim";
  sim->add_option("--preset", sim_preset,
                  std::string("scenario preset (") + cj_preset_names() + ")");
  sim->add_option("--n-obs", sim_n_obs, "observations per path");
  sim->add_option("--reps", sim_reps, "number of paths");
  sim->add_option("--seed", sim_seed, "random seed");
  sim->add_option("--out-prefix", sim_out, "output file prefix");

  // test
  auto* test = app.add_subcommand("test", "run both tests on a single series");
  InputFlags test_in;
  CommonTestFlags test_flags;
  double test_horizon = 1.0;
  test_in.attach(test, false);
  test_flags.attach(test);
  test->add_option("--horizon", test_horizon, "time span of the series");

  // experiment
  auto* exp = app.add_subcommand("experiment", "batch Monte-Carlo rejection tables");
  std::string exp_config, exp_preset, exp_out = "experiment_out";
  int exp_threads = 0;
  std::string exp_n_obs, exp_levels;
  int exp_reps = -1;
  long long exp_seed = -1;
  exp->add_option("--config", exp_config, "experiment config file");
  exp->add_option("--preset", exp_preset, "scenario preset override");
  exp->add_option("--out-dir", exp_out, "output directory");
  exp->add_option("--threads", exp_threads, "worker threads (0 = hardware)");
  exp->add_option("--n-obs", exp_n_obs, "comma list override");
  exp->add_option("--levels", exp_levels, "comma list override");
  exp->add_option("--reps", exp_reps, "replications override");
  exp->add_option("--seed", exp_seed, "seed override");

  // analyze
  auto* analyze = app.add_subcommand("analyze", "per-day reports from a CSV of days");
  InputFlags an_in;
  CommonTestFlags an_flags;
  an_flags.level = 0.01;
  double an_prefilter = 0.01;
  std::string an_out = "day_report.csv";
  an_in.attach(analyze, true);
  an_flags.attach(analyze);
  analyze->add_option("--prefilter-level", an_prefilter,
                      "univariate jump screen level (<= 0 disables)");
  analyze->add_option("--out", an_out, "output CSV path");

  CLI11_PARSE(app, argc, argv);

  if (sim->parsed()) return cmd_simulate(sim_preset, sim_n_obs, sim_reps, sim_seed, sim_out);
  if (test->parsed()) return cmd_test(test_in, test_flags, test_horizon);
  if (exp->parsed()) {
    std::string overrides;
    if (!exp_n_obs.empty()) overrides += "\n[experiment]\nn_obs = " + exp_n_obs + "\n";
    if (!exp_levels.empty()) overrides += "\n[experiment]\nlevels = " + exp_levels + "\n";
    if (exp_reps > 0)
      overrides += "\n[experiment]\nreplications = " + std::to_string(exp_reps) + "\n";
    if (exp_seed >= 0) overrides += "\n[experiment]\nseed = " + std::to_string(exp_seed) + "\n";
    return cmd_experiment(exp_config, exp_preset, overrides, exp_out, exp_threads);
  }
  if (analyze->parsed()) return cmd_analyze(an_in, an_flags, an_prefilter, an_out);
  return 1;
}
