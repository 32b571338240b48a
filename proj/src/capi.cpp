#include "cojump.h"

#include <cstring>
#include <fstream>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "cojump/experiment.hpp"
#include "cojump/oracle.hpp"
#include "cojump/power_variation.hpp"
#include "cojump/simulator.hpp"
#include "cojump/testing.hpp"

struct cj_series {
  cojump::IncrementSeries impl;
};
struct cj_report {
  cojump::StatReport impl;
};
struct cj_truth {
  cojump::PathTruth impl;
};

namespace {

thread_local std::string g_last_error;

cj_status map_errc(cojump::Errc code) {
  using cojump::Errc;
  switch (code) {
    case Errc::invalid_argument: return CJ_ERR_INVALID_ARGUMENT;
    case Errc::denominator_zero: return CJ_ERR_DENOMINATOR_ZERO;
    case Errc::insufficient_data: return CJ_ERR_INSUFFICIENT_DATA;
    case Errc::index_out_of_window: return CJ_ERR_INDEX_OUT_OF_WINDOW;
    case Errc::insufficient_draws: return CJ_ERR_INSUFFICIENT_DRAWS;
    case Errc::missing_power_guard: return CJ_ERR_MISSING_POWER_GUARD;
    case Errc::degenerate_config: return CJ_ERR_DEGENERATE_CONFIG;
    case Errc::parse_error: return CJ_ERR_PARSE;
    case Errc::gap_error: return CJ_ERR_GAP;
    case Errc::io_error: return CJ_ERR_IO;
  }
  return CJ_ERR_INTERNAL;
}

template <typename Fn>
cj_status guarded(Fn&& fn) {
  try {
    fn();
    return CJ_OK;
  } catch (const cojump::Error& e) {
    g_last_error = e.what();
    return map_errc(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return CJ_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return CJ_ERR_INTERNAL;
  }
}

cj_status invalid(const char* message) {
  g_last_error = message;
  return CJ_ERR_INVALID_ARGUMENT;
}

cojump::TestConfig to_config(const cj_test_config& cfg) {
  cojump::TestConfig out;
  out.k = cfg.k;
  out.level = cfg.level;
  out.trunc = cfg.trunc_alpha2 > 0.0
                  ? cojump::TruncationSpec::per_component(cfg.trunc_alpha, cfg.trunc_alpha2,
                                                          cfg.trunc_varpi)
                  : cojump::TruncationSpec::joint_norm(cfg.trunc_alpha, cfg.trunc_varpi);
  out.window = cfg.window;
  out.n_draws = cfg.n_draws;
  if (cfg.has_power_guard) out.power_guard = cojump::PowerGuard{cfg.power_alpha, cfg.power_varpi};
  return out;
}

cojump::ScenarioConfig to_scenario(const cj_scenario& sc) {
  cojump::ScenarioConfig out;
  out.rho = sc.rho;
  out.sigma1 = sc.sigma1;
  out.sigma2 = sc.sigma2;
  for (int s = 0; s < 3; ++s)
    out.sources[s] = cojump::JumpSourceConfig{sc.alpha[s], sc.lambda[s], sc.low[s], sc.high[s]};
  out.x0_1 = sc.x0_1;
  out.x0_2 = sc.x0_2;
  out.horizon = sc.horizon;
  out.fine_steps_per_obs = sc.fine_steps_per_obs;
  return out;
}

cj_decision map_decision(cojump::Decision d) {
  switch (d) {
    case cojump::Decision::retain: return CJ_RETAIN;
    case cojump::Decision::reject: return CJ_REJECT;
    case cojump::Decision::inapplicable: return CJ_INAPPLICABLE;
  }
  return CJ_INAPPLICABLE;
}

}  // namespace

extern "C" {

const char* cj_status_name(cj_status status) {
  switch (status) {
    case CJ_OK: return "ok";
    case CJ_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case CJ_ERR_DENOMINATOR_ZERO: return "denominator_zero";
    case CJ_ERR_INSUFFICIENT_DATA: return "insufficient_data";
    case CJ_ERR_INDEX_OUT_OF_WINDOW: return "index_out_of_window";
    case CJ_ERR_INSUFFICIENT_DRAWS: return "insufficient_draws";
    case CJ_ERR_MISSING_POWER_GUARD: return "missing_power_guard";
    case CJ_ERR_DEGENERATE_CONFIG: return "degenerate_config";
    case CJ_ERR_PARSE: return "parse_error";
    case CJ_ERR_GAP: return "gap_error";
    case CJ_ERR_IO: return "io_error";
    case CJ_ERR_INTERNAL: return "internal_error";
  }
  return "unknown";
}

const char* cj_last_error(void) { return g_last_error.c_str(); }

const char* cj_version(void) { return "cojump 1.0.0"; }

cj_status cj_series_create(double delta, const double* x1, const double* x2, size_t count,
                           cj_series** out) {
  if (!x1 || !x2 || !out) return invalid("cj_series_create: null pointer");
  return guarded([&] {
    std::vector<double> v1(x1, x1 + count), v2(x2, x2 + count);
    *out = new cj_series{cojump::IncrementSeries::from_increments(delta, std::move(v1),
                                                                  std::move(v2))};
  });
}

cj_status cj_series_from_levels(double delta, double horizon, const double* lv1, const double* lv2,
                                size_t n_levels, int take_logs, cj_series** out) {
  if (!lv1 || !lv2 || !out) return invalid("cj_series_from_levels: null pointer");
  return guarded([&] {
    std::vector<double> v1(lv1, lv1 + n_levels), v2(lv2, lv2 + n_levels);
    *out = new cj_series{
        cojump::IncrementSeries::from_levels(delta, horizon, v1, v2, take_logs != 0)};
  });
}

void cj_series_free(cj_series* series) { delete series; }

size_t cj_series_count(const cj_series* series) { return series ? series->impl.count() : 0; }
double cj_series_delta(const cj_series* series) { return series ? series->impl.delta() : 0.0; }
double cj_series_horizon(const cj_series* series) { return series ? series->impl.horizon() : 0.0; }

cj_status cj_series_increment(const cj_series* series, size_t i, double* x1, double* x2) {
  if (!series || !x1 || !x2) return invalid("cj_series_increment: null pointer");
  if (i >= series->impl.count()) return invalid("cj_series_increment: index out of range");
  *x1 = series->impl.x1(i);
  *x2 = series->impl.x2(i);
  return CJ_OK;
}

cj_status cj_realized_functional(const cj_series* series, cj_test_function fn, int block,
                                 double* out) {
  if (!series || !out) return invalid("cj_realized_functional: null pointer");
  return guarded([&] {
    cojump::TestFunctionId id = fn == CJ_FN_PROD_SQ     ? cojump::TestFunctionId::prod_sq
                                : fn == CJ_FN_QUARTIC_1 ? cojump::TestFunctionId::quartic_1
                                                        : cojump::TestFunctionId::quartic_2;
    *out = cojump::realized_functional(series->impl, id, block);
  });
}

cj_status cj_phi_joint(const cj_series* series, int k, double* out) {
  if (!series || !out) return invalid("cj_phi_joint: null pointer");
  return guarded([&] { *out = cojump::phi_joint(series->impl, k); });
}

cj_status cj_phi_disjoint(const cj_series* series, double* out) {
  if (!series || !out) return invalid("cj_phi_disjoint: null pointer");
  return guarded([&] { *out = cojump::phi_disjoint(series->impl); });
}

void cj_test_config_default(cj_test_config* cfg) {
  if (!cfg) return;
  cfg->k = 2;
  cfg->level = 0.05;
  cfg->trunc_alpha = 0.03;
  cfg->trunc_alpha2 = -1.0;
  cfg->trunc_varpi = 0.49;
  cfg->window = 0;
  cfg->n_draws = 0;
  cfg->has_power_guard = 0;
  cfg->power_alpha = 0.0;
  cfg->power_varpi = 0.0;
}

cj_status cj_run_tests(const cj_series* series, const cj_test_config* cfg, cj_joint_method jm,
                       cj_disjoint_method dm, cj_c_estimator ce, uint64_t seed, cj_report** out) {
  if (!series || !cfg || !out) return invalid("cj_run_tests: null pointer");
  return guarded([&] {
    const cojump::TestConfig config = to_config(*cfg);
    const cojump::StatReport rep = cojump::run_tests(
        series->impl, config, static_cast<cojump::JointMethod>(jm),
        static_cast<cojump::DisjointMethod>(dm), static_cast<cojump::CEstimator>(ce),
        cojump::RngStream(seed));
    *out = new cj_report{rep};
  });
}

void cj_report_free(cj_report* report) { delete report; }

double cj_report_phi_joint(const cj_report* report) {
  return report ? report->impl.phi_joint : std::numeric_limits<double>::quiet_NaN();
}
double cj_report_phi_disjoint(const cj_report* report) {
  return report ? report->impl.phi_disjoint : std::numeric_limits<double>::quiet_NaN();
}
cj_decision cj_report_joint_decision(const cj_report* report) {
  return report ? map_decision(report->impl.joint_decision) : CJ_INAPPLICABLE;
}
cj_decision cj_report_disjoint_decision(const cj_report* report) {
  return report ? map_decision(report->impl.disjoint_decision) : CJ_INAPPLICABLE;
}
int cj_report_category(const cj_report* report) { return report ? report->impl.category : 0; }
double cj_report_p_joint(const cj_report* report) {
  return report && report->impl.p_joint ? *report->impl.p_joint : -1.0;
}
double cj_report_p_disjoint(const cj_report* report) {
  return report && report->impl.p_disjoint ? *report->impl.p_disjoint : -1.0;
}

double cj_report_value(const cj_report* report, cj_report_field field) {
  if (!report) return std::numeric_limits<double>::quiet_NaN();
  const cojump::StatReport& r = report->impl;
  switch (field) {
    case CJ_FIELD_A_HAT: return r.scales.a_hat;
    case CJ_FIELD_A_HAT_TRUNC: return r.scales.a_hat_trunc;
    case CJ_FIELD_F_HAT: return r.scales.f_hat;
    case CJ_FIELD_FPRIME_HAT: return r.scales.fprime_hat;
    case CJ_FIELD_V_JOINT: return r.scales.v_joint;
    case CJ_FIELD_V_DISJOINT: return r.scales.v_disjoint;
    case CJ_FIELD_V_DISJOINT_TRUNC: return r.scales.v_disjoint_trunc;
    case CJ_FIELD_JOINT_CUTOFF: return r.joint_cutoff;
    case CJ_FIELD_DISJOINT_CUTOFF: return r.disjoint_cutoff;
    case CJ_FIELD_T_JOINT: return r.t_joint;
    case CJ_FIELD_T_DISJOINT: return r.t_disjoint;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

const char* cj_preset_names(void) {
  static const std::string names = [] {
    std::string acc;
    for (const std::string& n : cojump::preset_names()) {
      if (!acc.empty()) acc += ",";
      acc += n;
    }
    return acc;
  }();
  return names.c_str();
}

cj_status cj_scenario_preset(const char* name, cj_scenario* out) {
  if (!name || !out) return invalid("cj_scenario_preset: null pointer");
  const cojump::ScenarioConfig* cfg = cojump::find_preset(name);
  if (!cfg) {
    g_last_error = std::string("unknown preset '") + name + "'";
    return CJ_ERR_INVALID_ARGUMENT;
  }
  out->rho = cfg->rho;
  out->sigma1 = cfg->sigma1;
  out->sigma2 = cfg->sigma2;
  for (int s = 0; s < 3; ++s) {
    out->alpha[s] = cfg->sources[s].alpha;
    out->lambda[s] = cfg->sources[s].lambda;
    out->low[s] = cfg->sources[s].low;
    out->high[s] = cfg->sources[s].high;
  }
  out->x0_1 = cfg->x0_1;
  out->x0_2 = cfg->x0_2;
  out->horizon = cfg->horizon;
  out->fine_steps_per_obs = cfg->fine_steps_per_obs;
  return CJ_OK;
}

cj_status cj_simulate_path(const cj_scenario* scenario, int n_obs, uint64_t seed,
                           cj_series** out_series, cj_truth** out_truth) {
  if (!scenario || !out_series) return invalid("cj_simulate_path: null pointer");
  return guarded([&] {
    auto [series, truth] = cojump::simulate_path(to_scenario(*scenario), n_obs,
                                                 cojump::RngStream(seed));
    auto s = std::make_unique<cj_series>(cj_series{std::move(series)});
    std::unique_ptr<cj_truth> t;
    if (out_truth) t = std::make_unique<cj_truth>(cj_truth{std::move(truth)});
    // assign outputs only once every allocation has succeeded
    *out_series = s.release();
    if (out_truth) *out_truth = t.release();
  });
}

void cj_truth_free(cj_truth* truth) { delete truth; }

cj_path_class cj_truth_class(const cj_truth* truth) {
  if (!truth) return CJ_CLASS_CONTINUOUS;
  switch (truth->impl.path_class) {
    case cojump::PathClass::joint: return CJ_CLASS_JOINT;
    case cojump::PathClass::disjoint: return CJ_CLASS_DISJOINT;
    case cojump::PathClass::continuous_any: return CJ_CLASS_CONTINUOUS;
  }
  return CJ_CLASS_CONTINUOUS;
}

size_t cj_truth_jump_count(const cj_truth* truth) {
  return truth ? truth->impl.jumps.size() : 0;
}

cj_status cj_truth_jump(const cj_truth* truth, size_t q, double* time, int* source, double* mark,
                        double* jump1, double* jump2) {
  if (!truth) return invalid("cj_truth_jump: null pointer");
  if (q >= truth->impl.jumps.size()) return invalid("cj_truth_jump: index out of range");
  const cojump::JumpEvent& j = truth->impl.jumps[q];
  if (time) *time = j.time;
  if (source) *source = j.source;
  if (mark) *mark = j.mark;
  if (jump1) *jump1 = j.jump1;
  if (jump2) *jump2 = j.jump2;
  return CJ_OK;
}

cj_status cj_limit_quantities(const cj_truth* truth, double horizon, double out[6]) {
  if (!truth || !out) return invalid("cj_limit_quantities: null pointer");
  return guarded([&] {
    const cojump::LimitQuantities q = cojump::limit_quantities(truth->impl, horizon);
    out[0] = q.b;
    out[1] = q.b11;
    out[2] = q.b22;
    out[3] = q.c;
    out[4] = q.f;
    out[5] = q.fprime;
  });
}

cj_status cj_experiment_run(const char* config_text, const char* out_dir, int threads) {
  if (!config_text || !out_dir) return invalid("cj_experiment_run: null pointer");
  return guarded([&] {
    const cojump::ExperimentSpec spec = cojump::parse_experiment_config(config_text);
    const cojump::ExperimentResult result = cojump::run_experiment(spec, threads);
    cojump::write_experiment_csvs(result, out_dir);
  });
}

void cj_analyze_config_default(cj_analyze_config* cfg) {
  if (!cfg) return;
  cfg->format = CJ_FORMAT_RETURNS;
  cfg->col_day = 0;
  cfg->col_time = -1;
  cfg->col_x1 = 1;
  cfg->col_x2 = 2;
  cfg->has_header = 1;
  cj_test_config_default(&cfg->test);
  cfg->test.level = 0.01;
  cfg->joint_method = CJ_JOINT_SIMULATED;
  cfg->disjoint_method = CJ_DISJOINT_SIMULATED;
  cfg->c_estimator = CJ_C_MULTIPOWER;
  cfg->prefilter_level = 0.01;
  cfg->calibrate_truncation = 1;
  cfg->seed = 12345;
}

cj_status cj_analyze_file(const char* csv_path, const cj_analyze_config* cfg,
                          const char* out_csv) {
  if (!csv_path || !cfg || !out_csv) return invalid("cj_analyze_file: null pointer");
  return guarded([&] {
    cojump::CsvColumns columns;
    columns.day = cfg->col_day;
    columns.time = cfg->col_time;
    columns.x1 = cfg->col_x1;
    columns.x2 = cfg->col_x2;
    columns.header = cfg->has_header != 0;
    const cojump::SeriesFormat format = cfg->format == CJ_FORMAT_LEVELS
                                            ? cojump::SeriesFormat::levels
                                        : cfg->format == CJ_FORMAT_LOG_LEVELS
                                            ? cojump::SeriesFormat::log_levels
                                            : cojump::SeriesFormat::returns;
    const std::vector<cojump::DayRecord> days = cojump::ingest_csv(csv_path, format, columns);
    cojump::AnalyzeOptions options;
    options.test = to_config(cfg->test);
    options.joint_method = static_cast<cojump::JointMethod>(cfg->joint_method);
    options.disjoint_method = static_cast<cojump::DisjointMethod>(cfg->disjoint_method);
    options.c_estimator = static_cast<cojump::CEstimator>(cfg->c_estimator);
    options.prefilter_level = cfg->prefilter_level;
    options.calibrate_truncation = cfg->calibrate_truncation != 0;
    options.seed = cfg->seed;
    const std::vector<cojump::DayReportRow> rows = cojump::analyze_days(days, options);
    std::ofstream out(out_csv);
    if (!out) cojump::fail(cojump::Errc::io_error, std::string("cannot write '") + out_csv + "'");
    cojump::write_day_report(rows, out);
  });
}

}  // extern "C"
