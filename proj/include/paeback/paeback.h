/*
 * C interface to the PaEBack library: back-subsample selection for
 * autoregressive forecasting.
 *
 * Conventions:
 *  - Every fallible call returns pb_status; on failure pb_last_error() holds a
 *    one-line diagnostic for the calling thread.
 *  - Objects are opaque handles released by their matching *_free function.
 *    *_free accepts NULL.
 *  - Strings returned through char** out-parameters are owned by the caller
 *    and released with pb_string_free.
 *  - Borrowed pointers (pb_series_data, pb_model_phi, ...) stay valid until
 *    the owning handle is freed.
 */
#ifndef PAEBACK_H
#define PAEBACK_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(PAEBACK_BUILDING_LIBRARY)
#    define PAEBACK_API __declspec(dllexport)
#  else
#    define PAEBACK_API __declspec(dllimport)
#  endif
#else
#  define PAEBACK_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pb_status {
  PB_OK = 0,
  PB_ERR_INVALID_ARGUMENT = 1,
  PB_ERR_IO = 2,
  PB_ERR_PARSE = 3,
  PB_ERR_INSUFFICIENT_DATA = 4,
  PB_ERR_SINGULAR = 5,
  PB_ERR_NOT_STATIONARY = 6,
  PB_ERR_CONVERGENCE = 7,
  PB_ERR_INTERNAL = 99
} pb_status;

typedef enum pb_criterion { PB_MSE = 0, PB_MAE, PB_MAPE, PB_RMSE, PB_SMAPE } pb_criterion;

typedef enum pb_format { PB_FORMAT_JSON = 0, PB_FORMAT_CSV = 1 } pb_format;

typedef enum pb_method_kind {
  PB_METHOD_YW = 0, /* Yule-Walker at a fixed order */
  PB_METHOD_AL,     /* adaptive LASSO, lambda tuned by sliding window */
  PB_METHOD_AE,     /* adaptive elastic net, alpha = 0.5, lambda tuned */
  PB_METHOD_ATE     /* adaptive elastic net, lambda and alpha tuned */
} pb_method_kind;

typedef enum pb_generator { PB_GEN_AR = 0, PB_GEN_TAR1 = 1 } pb_generator;

typedef enum pb_k_grid_rule {
  PB_KGRID_DEFAULT = 0, /* all k when n <= 300, else 100 evenly spaced */
  PB_KGRID_ALL,
  PB_KGRID_FULL_ONLY,   /* only k = n */
  PB_KGRID_EXPLICIT
} pb_k_grid_rule;

typedef struct pb_series pb_series;
typedef struct pb_model pb_model;
typedef struct pb_tune pb_tune;
typedef struct pb_report pb_report;
typedef struct pb_curve pb_curve;
typedef struct pb_study pb_study;
typedef struct pb_fukuchi pb_fukuchi;

/* Fitting method. Grids may be NULL/0 for the defaults. */
typedef struct pb_method {
  pb_method_kind kind;
  size_t order; /* p for YW, maximum order p_m otherwise */
  const double* lambda_grid;
  size_t lambda_count;
  const double* alpha_grid;
  size_t alpha_count;
  double gamma;         /* adaptive-weight exponent, default 1 */
  int monotone_weights; /* non-increasing weight adjustment, default 1 */
} pb_method;

typedef struct pb_sim_spec {
  size_t n;
  uint64_t seed;
  size_t burn_in; /* default 500 */
  pb_generator generator;
  const pb_model* ar_model; /* PB_GEN_AR only */
  double tar_sigma;         /* PB_GEN_TAR1 innovation scale, default 1 */
} pb_sim_spec;

typedef struct pb_study_config {
  pb_generator generator;
  const pb_model* ar_model;
  double tar_sigma;
  const size_t* ns;
  size_t n_count;
  const size_t* hs;
  size_t h_count;
  size_t replicates;
  pb_k_grid_rule k_grid_rule;
  const size_t* k_values; /* PB_KGRID_EXPLICIT */
  size_t k_count;
  const pb_method* methods;
  size_t method_count;
  uint64_t base_seed;
  size_t burn_in;
  pb_criterion criterion;
  size_t jobs;
} pb_study_config;

PAEBACK_API const char* pb_version(void);
PAEBACK_API const char* pb_last_error(void);
PAEBACK_API const char* pb_status_string(pb_status status);
PAEBACK_API void pb_string_free(char* s);

PAEBACK_API void pb_method_init(pb_method* m, pb_method_kind kind, size_t order);
PAEBACK_API void pb_sim_spec_init(pb_sim_spec* s);
PAEBACK_API void pb_study_config_init(pb_study_config* c);
PAEBACK_API pb_status pb_parse_method_kind(const char* name, pb_method_kind* out);
PAEBACK_API pb_status pb_parse_criterion(const char* name, pb_criterion* out);

/* Series */
PAEBACK_API pb_status pb_series_create(const double* values, size_t n, pb_series** out);
/* column_name selects by header; when NULL, column_index is used.
   label_name may be NULL. */
PAEBACK_API pb_status pb_series_load_csv(const char* path, const char* column_name, size_t column_index,
                                         const char* label_name, pb_series** out);
PAEBACK_API void pb_series_free(pb_series* s);
PAEBACK_API size_t pb_series_length(const pb_series* s);
PAEBACK_API const double* pb_series_data(const pb_series* s);
PAEBACK_API pb_status pb_series_slice(const pb_series* s, size_t first, size_t count, pb_series** out);
PAEBACK_API pb_status pb_series_log_return(const pb_series* prices, pb_series** out);
PAEBACK_API pb_status pb_series_encode(const pb_series* s, pb_format format, char** out);

PAEBACK_API pb_status pb_evaluate(const double* actual, const double* predicted, size_t len, pb_criterion criterion,
                                  double* out);

/* AR models */
PAEBACK_API pb_status pb_model_create(const double* phi, size_t p, double sigma2, double mean, pb_model** out);
PAEBACK_API pb_status pb_model_fit(const pb_series* window, const pb_method* method, pb_model** out);
PAEBACK_API void pb_model_free(pb_model* m);
PAEBACK_API size_t pb_model_order(const pb_model* m);
PAEBACK_API const double* pb_model_phi(const pb_model* m);
PAEBACK_API double pb_model_sigma2(const pb_model* m);
PAEBACK_API double pb_model_mean(const pb_model* m);
PAEBACK_API pb_status pb_model_encode(const pb_model* m, char** out);
PAEBACK_API int pb_is_stationary(const double* phi, size_t p);
/* out must hold h values. */
PAEBACK_API pb_status pb_forecast(const pb_model* m, const pb_series* history, size_t h, double* out);
PAEBACK_API pb_status pb_simulate(const pb_sim_spec* spec, pb_series** out);

/* Sliding-window penalized tuning (method kind AL, AE or ATE). */
PAEBACK_API pb_status pb_tune_sw(const pb_series* window, const pb_method* method, pb_tune** out);
PAEBACK_API void pb_tune_free(pb_tune* t);
PAEBACK_API double pb_tune_lambda(const pb_tune* t);
PAEBACK_API double pb_tune_alpha(const pb_tune* t);
PAEBACK_API size_t pb_tune_order(const pb_tune* t);
PAEBACK_API const double* pb_tune_coefficients(const pb_tune* t);
PAEBACK_API pb_status pb_tune_encode(const pb_tune* t, char** out);

/* Asymptotic constants */
PAEBACK_API pb_status pb_report_compute(const double* phi, size_t p, double sigma2, size_t h, pb_report** out);
PAEBACK_API pb_status pb_report_estimate(const pb_series* s, size_t p, size_t h, pb_report** out);
PAEBACK_API void pb_report_free(pb_report* r);
PAEBACK_API double pb_report_ratio(const pb_report* r);
PAEBACK_API double pb_report_a(const pb_report* r);
PAEBACK_API double pb_report_b(const pb_report* r);
PAEBACK_API pb_status pb_report_encode(const pb_report* r, char** out);
PAEBACK_API pb_status pb_amse(const pb_report* r, double k, double* out);
PAEBACK_API pb_status pb_asymptotic_rp(size_t k, size_t n, double ab, double* out);
PAEBACK_API pb_status pb_optimal_k(size_t n, double lambda, double ab, size_t* out);

/* Efficiency curves. k_grid may be NULL/0 for the default grid. */
PAEBACK_API pb_status pb_curve_compute(const pb_series* s, size_t n, size_t h, const size_t* k_grid, size_t k_count,
                                       const pb_method* method, pb_criterion criterion, pb_curve** out);
PAEBACK_API void pb_curve_free(pb_curve* c);
PAEBACK_API size_t pb_curve_size(const pb_curve* c);
PAEBACK_API pb_status pb_curve_point(const pb_curve* c, size_t i, size_t* k, double* r_s, double* score, double* r_p);
PAEBACK_API size_t pb_curve_optimal_k(const pb_curve* c);
PAEBACK_API pb_status pb_curve_encode(const pb_curve* c, pb_format format, char** out);

/* Monte Carlo studies */
PAEBACK_API pb_status pb_study_run(const pb_study_config* config, pb_study** out);
PAEBACK_API void pb_study_free(pb_study* s);
PAEBACK_API size_t pb_study_cell_count(const pb_study* s);
PAEBACK_API pb_status pb_study_cell_baseline(const pb_study* s, size_t cell, double* mean_score_n, double* se_score_n);
PAEBACK_API pb_status pb_study_encode(const pb_study* s, pb_format format, char** out);

/* Overlapping sliding-window baseline. k_grid may be NULL/0. */
PAEBACK_API pb_status pb_fukuchi_run(const pb_series* s, size_t h, const size_t* k_grid, size_t k_count,
                                     const pb_method* method, pb_fukuchi** out);
PAEBACK_API void pb_fukuchi_free(pb_fukuchi* f);
PAEBACK_API size_t pb_fukuchi_selected(const pb_fukuchi* f);
PAEBACK_API pb_status pb_fukuchi_encode(const pb_fukuchi* f, pb_format format, char** out);

#ifdef __cplusplus
}
#endif

#endif /* PAEBACK_H */
