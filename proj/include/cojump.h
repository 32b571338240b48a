/* C interface of the cojump library: opaque handles plus status codes.
 * Every function returning cj_status leaves outputs untouched on failure;
 * cj_last_error() describes the most recent failure on the calling thread. */
#ifndef COJUMP_H
#define COJUMP_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define CJ_API __declspec(dllexport)
#else
#define CJ_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cj_status {
  CJ_OK = 0,
  CJ_ERR_INVALID_ARGUMENT = 1,
  CJ_ERR_DENOMINATOR_ZERO = 2,
  CJ_ERR_INSUFFICIENT_DATA = 3,
  CJ_ERR_INDEX_OUT_OF_WINDOW = 4,
  CJ_ERR_INSUFFICIENT_DRAWS = 5,
  CJ_ERR_MISSING_POWER_GUARD = 6,
  CJ_ERR_DEGENERATE_CONFIG = 7,
  CJ_ERR_PARSE = 8,
  CJ_ERR_GAP = 9,
  CJ_ERR_IO = 10,
  CJ_ERR_INTERNAL = 11
} cj_status;

CJ_API const char* cj_status_name(cj_status status);
CJ_API const char* cj_last_error(void);
CJ_API const char* cj_version(void);

/* ------------------------------------------------------------------ */
/* Increment series                                                    */

typedef struct cj_series cj_series;

CJ_API cj_status cj_series_create(double delta, const double* x1, const double* x2, size_t count,
                                  cj_series** out);
CJ_API cj_status cj_series_from_levels(double delta, double horizon, const double* lv1,
                                       const double* lv2, size_t n_levels, int take_logs,
                                       cj_series** out);
CJ_API void cj_series_free(cj_series* series);
CJ_API size_t cj_series_count(const cj_series* series);
CJ_API double cj_series_delta(const cj_series* series);
CJ_API double cj_series_horizon(const cj_series* series);
CJ_API cj_status cj_series_increment(const cj_series* series, size_t i, double* x1, double* x2);

/* ------------------------------------------------------------------ */
/* Raw statistics                                                      */

typedef enum cj_test_function {
  CJ_FN_PROD_SQ = 0,
  CJ_FN_QUARTIC_1 = 1,
  CJ_FN_QUARTIC_2 = 2
} cj_test_function;

CJ_API cj_status cj_realized_functional(const cj_series* series, cj_test_function fn, int block,
                                        double* out);
CJ_API cj_status cj_phi_joint(const cj_series* series, int k, double* out);
CJ_API cj_status cj_phi_disjoint(const cj_series* series, double* out);

/* ------------------------------------------------------------------ */
/* Hypothesis tests                                                    */

typedef enum cj_joint_method {
  CJ_JOINT_NORMAL = 0,
  CJ_JOINT_CHEBYSHEV = 1,
  CJ_JOINT_SIMULATED = 2,
  CJ_JOINT_NORMAL_TRUNCATED = 3,
  CJ_JOINT_CHEBYSHEV_TRUNCATED = 4
} cj_joint_method;

typedef enum cj_disjoint_method { CJ_DISJOINT_MARKOV = 0, CJ_DISJOINT_SIMULATED = 1 } cj_disjoint_method;

typedef enum cj_c_estimator { CJ_C_MULTIPOWER = 0, CJ_C_TRUNCATED = 1 } cj_c_estimator;

typedef enum cj_decision { CJ_RETAIN = 0, CJ_REJECT = 1, CJ_INAPPLICABLE = 2 } cj_decision;

typedef struct cj_test_config {
  int k;              /* coarse scale, >= 2 */
  double level;       /* significance level in (0,1) */
  double trunc_alpha; /* truncation alpha (component 1 in per-component mode) */
  double trunc_alpha2; /* per-component alpha for component 2; <= 0 for joint-norm */
  double trunc_varpi;
  int window;          /* k_n; 0 derives round(1/sqrt(delta)) */
  int n_draws;         /* resampling copies; 0 derives min(20000, ceil(1000/level)) */
  int has_power_guard; /* enables the two truncated joint methods */
  double power_alpha;
  double power_varpi;
} cj_test_config;

CJ_API void cj_test_config_default(cj_test_config* cfg);

typedef struct cj_report cj_report;

CJ_API cj_status cj_run_tests(const cj_series* series, const cj_test_config* cfg,
                              cj_joint_method jm, cj_disjoint_method dm, cj_c_estimator ce,
                              uint64_t seed, cj_report** out);
CJ_API void cj_report_free(cj_report* report);

CJ_API double cj_report_phi_joint(const cj_report* report);
CJ_API double cj_report_phi_disjoint(const cj_report* report);
CJ_API cj_decision cj_report_joint_decision(const cj_report* report);
CJ_API cj_decision cj_report_disjoint_decision(const cj_report* report);
CJ_API int cj_report_category(const cj_report* report);
/* p-values are negative when not defined for the chosen method */
CJ_API double cj_report_p_joint(const cj_report* report);
CJ_API double cj_report_p_disjoint(const cj_report* report);

typedef enum cj_report_field {
  CJ_FIELD_A_HAT = 0,
  CJ_FIELD_A_HAT_TRUNC = 1,
  CJ_FIELD_F_HAT = 2,
  CJ_FIELD_FPRIME_HAT = 3,
  CJ_FIELD_V_JOINT = 4,
  CJ_FIELD_V_DISJOINT = 5,
  CJ_FIELD_V_DISJOINT_TRUNC = 6,
  CJ_FIELD_JOINT_CUTOFF = 7,
  CJ_FIELD_DISJOINT_CUTOFF = 8,
  CJ_FIELD_T_JOINT = 9,
  CJ_FIELD_T_DISJOINT = 10
} cj_report_field;

CJ_API double cj_report_value(const cj_report* report, cj_report_field field);

/* ------------------------------------------------------------------ */
/* Scenario simulation                                                 */

typedef struct cj_scenario {
  double rho;
  double sigma1, sigma2; /* volatilities */
  double alpha[3], lambda[3], low[3], high[3];
  double x0_1, x0_2;
  double horizon;
  int fine_steps_per_obs;
} cj_scenario;

CJ_API const char* cj_preset_names(void); /* comma separated */
CJ_API cj_status cj_scenario_preset(const char* name, cj_scenario* out);

typedef enum cj_path_class {
  CJ_CLASS_JOINT = 0,
  CJ_CLASS_DISJOINT = 1,
  CJ_CLASS_CONTINUOUS = 2
} cj_path_class;

typedef struct cj_truth cj_truth;

CJ_API cj_status cj_simulate_path(const cj_scenario* scenario, int n_obs, uint64_t seed,
                                  cj_series** out_series, cj_truth** out_truth);
CJ_API void cj_truth_free(cj_truth* truth);
CJ_API cj_path_class cj_truth_class(const cj_truth* truth);
CJ_API size_t cj_truth_jump_count(const cj_truth* truth);
CJ_API cj_status cj_truth_jump(const cj_truth* truth, size_t q, double* time, int* source,
                               double* mark, double* jump1, double* jump2);
/* out[6] = { B, B11, B22, C, F, Fprime } */
CJ_API cj_status cj_limit_quantities(const cj_truth* truth, double horizon, double out[6]);

/* ------------------------------------------------------------------ */
/* Batch harness                                                       */

/* config_text uses the sectioned key = value format described in the
 * README; outputs are written into out_dir and are byte-identical for a
 * fixed config regardless of the thread count. */
CJ_API cj_status cj_experiment_run(const char* config_text, const char* out_dir, int threads);

typedef enum cj_series_format {
  CJ_FORMAT_LEVELS = 0,
  CJ_FORMAT_LOG_LEVELS = 1,
  CJ_FORMAT_RETURNS = 2
} cj_series_format;

typedef struct cj_analyze_config {
  cj_series_format format;
  int col_day, col_time, col_x1, col_x2; /* 0-based; col_time < 0 for none */
  int has_header;
  cj_test_config test;
  cj_joint_method joint_method;
  cj_disjoint_method disjoint_method;
  cj_c_estimator c_estimator;
  double prefilter_level;    /* <= 0 disables the univariate jump screen */
  int calibrate_truncation;  /* per-day bipower-calibrated thresholds */
  uint64_t seed;
} cj_analyze_config;

CJ_API void cj_analyze_config_default(cj_analyze_config* cfg);
CJ_API cj_status cj_analyze_file(const char* csv_path, const cj_analyze_config* cfg,
                                 const char* out_csv);

#ifdef __cplusplus
}
#endif

#endif /* COJUMP_H */
