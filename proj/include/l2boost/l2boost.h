#ifndef L2BOOST_H
#define L2BOOST_H

/*
 * C interface to the boosting toolkit: componentwise and orthogonal L2
 * boosting with early stopping, support refits, a coordinate-descent lasso,
 * greedy-approximation diagnostics, and the Monte-Carlo experiment runner.
 *
 * Every function that can fail returns 0 on success and a nonzero status
 * code; l2b_last_error() describes the most recent failure on the calling
 * thread. Handles are opaque and owned by the caller via the matching
 * *_free function. Buffers are plain double/long arrays sized by the caller.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(L2B_BUILD)
#define L2B_API __declspec(dllexport)
#else
#define L2B_API __declspec(dllimport)
#endif
#else
#define L2B_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

enum {
  L2B_OK = 0,
  L2B_E_INVALID_ARGUMENT = 1,
  L2B_E_CONSTANT_COLUMN = 2,
  L2B_E_LENGTH_MISMATCH = 3,
  L2B_E_SINGULAR_GRAM = 4,
  L2B_E_NOT_SYMMETRIC = 5,
  L2B_E_PARSE = 6,
  L2B_E_MISSING_COLUMN = 7,
  L2B_E_ZERO_RESIDUAL = 8,
  L2B_E_ORACLE_UNAVAILABLE = 9,
  L2B_E_INVALID_THRESHOLD = 10,
  L2B_E_DOMAIN = 11,
  L2B_E_NO_CONVERGENCE = 12,
  L2B_E_INSUFFICIENT_EIGEN_SCAN = 13,
  L2B_E_IO = 14,
  L2B_E_UNKNOWN = 99
};

typedef struct l2b_dataset l2b_dataset;
typedef struct l2b_path l2b_path;
typedef struct l2b_eigen l2b_eigen;
typedef struct l2b_bounds l2b_bounds;
typedef struct l2b_table l2b_table;
typedef struct l2b_curve l2b_curve;

L2B_API const char* l2b_version(void);

/* Message for the most recent failing call on this thread. */
L2B_API const char* l2b_last_error(void);

/* Frees strings returned through char** out-parameters. */
L2B_API void l2b_string_free(char* s);

/* -------------------------------------------------------------- datasets */

L2B_API int l2b_dataset_from_csv(const char* path, const char* response, int center_y,
                                 l2b_dataset** out);

/* Seeded row split; the test part is standardized with training statistics. */
L2B_API int l2b_dataset_split_csv(const char* path, const char* response, int center_y,
                                  double test_fraction, uint64_t seed, l2b_dataset** train,
                                  l2b_dataset** test);

/* x is row-major with n rows and p columns. */
L2B_API int l2b_dataset_standardize(const double* x, size_t n, size_t p, const double* y,
                                    int center_y, l2b_dataset** out);

/* Attaches true coefficients in the standardized basis (diagnostics, oracles). */
L2B_API int l2b_dataset_set_truth(l2b_dataset* ds, const double* beta, size_t p);

L2B_API size_t l2b_dataset_rows(const l2b_dataset* ds);
L2B_API size_t l2b_dataset_cols(const l2b_dataset* ds);
L2B_API const char* l2b_dataset_name(const l2b_dataset* ds, size_t j);
L2B_API double l2b_dataset_mean(const l2b_dataset* ds, size_t j);
L2B_API double l2b_dataset_scale(const l2b_dataset* ds, size_t j);
L2B_API double l2b_dataset_y_center(const l2b_dataset* ds);

/* Fitted values on the original y scale; out has room for n rows. */
L2B_API int l2b_dataset_predict(const l2b_dataset* ds, const double* beta, size_t p, double* out);

/* Response values on the original y scale; out has room for n rows. */
L2B_API int l2b_dataset_actual(const l2b_dataset* ds, double* out);

/* Mean squared residual of the (standardized-basis) coefficients on ds. */
L2B_API int l2b_dataset_mse(const l2b_dataset* ds, const double* beta, size_t p, double* mse);

L2B_API void l2b_dataset_free(l2b_dataset* ds);

/* -------------------------------------------------------------- boosting */

enum {
  L2B_STOP_NONE = 0,
  L2B_STOP_FIXED = 1,
  L2B_STOP_KS = 2,
  L2B_STOP_RATIO = 3,
  L2B_STOP_ORACLE = 4,
  L2B_STOP_VBOUND = 5
};

typedef struct l2b_stop_spec {
  int kind;
  long m_fixed;    /* L2B_STOP_FIXED */
  long k;          /* L2B_STOP_KS */
  long s;          /* L2B_STOP_KS, L2B_STOP_VBOUND */
  double cu;       /* L2B_STOP_RATIO */
  double eta;      /* L2B_STOP_VBOUND */
  double lambda_n; /* L2B_STOP_VBOUND */
  double c;        /* L2B_STOP_VBOUND */
  int theory_mode; /* enforce the constants the theory requires */
} l2b_stop_spec;

L2B_API void l2b_stop_default(l2b_stop_spec* spec);

enum { L2B_PLAIN = 0, L2B_ORTHOGONAL = 1 };

L2B_API int l2b_fit(const l2b_dataset* ds, int variant, double nu, long max_steps,
                    const l2b_stop_spec* stop, l2b_path** out);

L2B_API long l2b_path_models(const l2b_path* path);
L2B_API long l2b_path_stop_step(const l2b_path* path);
L2B_API const char* l2b_path_stop_reason(const l2b_path* path);
L2B_API double l2b_path_residual_sq(const l2b_path* path, long t);

/* ||V^t||^2 against attached truth; NaN when no truth is attached. */
L2B_API double l2b_path_pred_sq(const l2b_path* path, long t);

/* Step i in 0..models-1; label is 'R' (revisit) or 'N' (fresh). Null
 * out-pointers are skipped. */
L2B_API int l2b_path_step(const l2b_path* path, long i, long* j, double* gamma,
                          double* residual_sq, char* label);

L2B_API int l2b_path_beta(const l2b_path* path, long t, double* beta, size_t p);

/* Distinct selections among the first t steps, ascending. Returns the count;
 * fills at most cap entries when js is non-null. Negative on error. */
L2B_API long l2b_path_support(const l2b_path* path, long t, long* js, size_t cap);

L2B_API int l2b_path_write_csv(const l2b_path* path, const char* file);
L2B_API void l2b_path_free(l2b_path* path);

/* OLS on the given columns; beta receives the full-length vector. */
L2B_API int l2b_post_refit(const l2b_dataset* ds, const long* support, size_t count, double* beta);

/* ----------------------------------------------------------------- lasso */

typedef struct l2b_lasso_spec {
  double tol;
  long max_sweeps;
  long folds;
  long grid_size;
  double alpha;
} l2b_lasso_spec;

L2B_API void l2b_lasso_default(l2b_lasso_spec* spec);

L2B_API int l2b_lasso_fit(const l2b_dataset* ds, double lambda, const l2b_lasso_spec* spec,
                          double* beta, int* converged);

/* Data-driven penalty: 1.1 * sigma_hat * qnorm(1 - alpha/(2p)) / sqrt(n). */
L2B_API int l2b_lasso_plugin(const l2b_dataset* ds, const l2b_lasso_spec* spec, double* lambda,
                             double* sigma_hat);

L2B_API int l2b_lasso_cv(const l2b_dataset* ds, const l2b_lasso_spec* spec, uint64_t seed,
                         double* lambda);

/* ---------------------------------------------------------------- theory */

L2B_API int l2b_theory_constants(double c, double* mu_a, double* mu_e, double* zeta_star,
                                 double* lambda_star, double* rate);

/* 2 * sigma * sqrt(log(2p/alpha) / n) */
L2B_API int l2b_lambda_n(double sigma, long p, long n, double alpha, double* out);

L2B_API int l2b_eigen_scan(const l2b_dataset* ds, long s_max, long budget, uint64_t seed,
                           l2b_eigen** out);
L2B_API long l2b_eigen_sizes(const l2b_eigen* report);
L2B_API int l2b_eigen_row(const l2b_eigen* report, long s, double* phi_small, double* phi_large,
                          int* exhaustive);
L2B_API double l2b_eigen_c(const l2b_eigen* report);
L2B_API int l2b_eigen_degenerate(const l2b_eigen* report);
L2B_API int l2b_eigen_write_csv(const l2b_eigen* report, const char* file);
L2B_API void l2b_eigen_free(l2b_eigen* report);

/* Noiseless y = X beta; design row-major, standardized if not already. */
L2B_API int l2b_pga_dataset(const double* design, size_t n, size_t p, const double* beta,
                            l2b_dataset** out);

/* Seeded noiseless draw: gaussian design (toeplitz != 0 for the correlated
 * one), sparse coefficients with s ones, standardized, truth attached. */
L2B_API int l2b_pga_random(long n, long p, long s, int toeplitz, uint64_t seed, l2b_dataset** out);

L2B_API int l2b_check_bounds(const l2b_dataset* ds, const l2b_path* path, const l2b_eigen* report,
                             double tolerance, double delta, double lambda_n, l2b_bounds** out);
L2B_API long l2b_bounds_count(const l2b_bounds* bounds);
L2B_API const char* l2b_bounds_name(const l2b_bounds* bounds, long i);
L2B_API int l2b_bounds_flags(const l2b_bounds* bounds, long i, int* violated, int* advisory,
                             long* skipped, double* worst_slack);
L2B_API int l2b_bounds_write_csv(const l2b_bounds* bounds, const char* file);
L2B_API void l2b_bounds_free(l2b_bounds* bounds);

/* ------------------------------------------------------------ simulation */

/* Canned spec files: "table3" (experiments), "illustrative" (curve). */
L2B_API int l2b_preset_json(const char* name, char** out);

/* Expands a spec file (single dgp or a dgps list) into the fully resolved
 * experiment array actually run; for provenance manifests. */
L2B_API int l2b_experiments_resolved_json(const char* spec_json, char** out);

L2B_API int l2b_run_experiments_json(const char* spec_json, int workers, l2b_table** out);
L2B_API long l2b_table_rows(const l2b_table* table);
L2B_API const char* l2b_table_method(const l2b_table* table, long row);
L2B_API const char* l2b_table_beta_design(const l2b_table* table, long row);
L2B_API const char* l2b_table_x_design(const l2b_table* table, long row);
L2B_API int l2b_table_dgp(const l2b_table* table, long row, long* n, long* p, long* s,
                          double* noise_sd, long* holdout);
L2B_API int l2b_table_row(const l2b_table* table, long row, double* mse_mean, double* mse_se,
                          double* mean_stop, double* mean_support, long* failures);
L2B_API int l2b_table_write_csv(const l2b_table* table, const char* file);
L2B_API void l2b_table_free(l2b_table* table);

L2B_API int l2b_step_curve_json(const char* spec_json, int workers, l2b_curve** out);
L2B_API int l2b_curve_resolved_json(const char* spec_json, char** out);
L2B_API long l2b_curve_len(const l2b_curve* curve);
L2B_API int l2b_curve_point(const l2b_curve* curve, long m, double* mse_in, double* mse_out);
L2B_API int l2b_curve_refs(const l2b_curve* curve, double* ols_ref, double* lasso_ref,
                           double* ratio_mse, double* ratio_step);
L2B_API int l2b_curve_write_csv(const l2b_curve* curve, const char* file);
L2B_API void l2b_curve_free(l2b_curve* curve);

#ifdef __cplusplus
}
#endif

#endif /* L2BOOST_H */
