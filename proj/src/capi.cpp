#include "l2boost/l2boost.h"

#include "boosting.hpp"
#include "dataset.hpp"
#include "errors.hpp"
#include "lasso.hpp"
#include "simlab.hpp"
#include "stopping.hpp"
#include "theory.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <string>

struct l2b_dataset {
  l2boost::dataset ds;
};
struct l2b_path {
  l2boost::boost_path path;
};
struct l2b_eigen {
  l2boost::eigen_report report;
};
struct l2b_bounds {
  std::vector<l2boost::bound_report> reports;
};
struct l2b_table {
  l2boost::result_table table;
};
struct l2b_curve {
  l2boost::curve_table curve;
};

namespace {

thread_local std::string g_last_error;

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    fn();
    return L2B_OK;
  } catch (const l2boost::error& e) {
    g_last_error = e.what();
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return L2B_E_UNKNOWN;
  }
}

int require(bool ok, const char* message) {
  if (ok) return L2B_OK;
  g_last_error = message;
  return L2B_E_INVALID_ARGUMENT;
}

char* alloc_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

l2boost::matrix row_major_matrix(const double* x, size_t n, size_t p) {
  l2boost::matrix m(n, p);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < p; ++j) m(i, j) = x[i * p + j];
  return m;
}

l2boost::stopping_rule rule_from(const l2b_stop_spec* stop) {
  if (stop == nullptr) return l2boost::stopping_rule::none();
  switch (stop->kind) {
    case L2B_STOP_NONE: return l2boost::stopping_rule::none();
    case L2B_STOP_FIXED: return l2boost::stopping_rule::fixed(stop->m_fixed);
    case L2B_STOP_KS: return l2boost::stopping_rule::ks(stop->k, stop->s);
    case L2B_STOP_RATIO: return l2boost::stopping_rule::ratio(stop->cu, stop->theory_mode != 0);
    case L2B_STOP_ORACLE: return l2boost::stopping_rule::oracle();
    case L2B_STOP_VBOUND:
      return l2boost::stopping_rule::vbound(stop->eta, stop->lambda_n, stop->s, stop->c,
                                            stop->theory_mode != 0);
    default: l2boost::fail(l2boost::errc::invalid_argument, "unknown stop kind");
  }
}

l2boost::lasso_config lasso_from(const l2b_lasso_spec* spec) {
  l2boost::lasso_config cfg;
  if (spec != nullptr) {
    cfg.convergence_tol = spec->tol;
    cfg.max_sweeps = spec->max_sweeps;
    cfg.folds = spec->folds;
    cfg.grid_size = spec->grid_size;
    cfg.alpha = spec->alpha;
  }
  return cfg;
}

} // namespace

extern "C" {

const char* l2b_version(void) { return "0.1.0"; }

const char* l2b_last_error(void) { return g_last_error.c_str(); }

void l2b_string_free(char* s) { std::free(s); }

/* -------------------------------------------------------------- datasets */

int l2b_dataset_from_csv(const char* path, const char* response, int center_y, l2b_dataset** out) {
  if (int rc = require(path && response && out, "null argument")) return rc;
  return guarded([&] {
    *out = new l2b_dataset{l2boost::dataset_from_csv(path, response, center_y != 0)};
  });
}

int l2b_dataset_split_csv(const char* path, const char* response, int center_y,
                          double test_fraction, uint64_t seed, l2b_dataset** train,
                          l2b_dataset** test) {
  if (int rc = require(path && response && train && test, "null argument")) return rc;
  return guarded([&] {
    auto [tr, te] =
        l2boost::dataset_from_csv_split(path, response, center_y != 0, test_fraction, seed);
    *train = new l2b_dataset{std::move(tr)};
    *test = new l2b_dataset{std::move(te)};
  });
}

int l2b_dataset_standardize(const double* x, size_t n, size_t p, const double* y, int center_y,
                            l2b_dataset** out) {
  if (int rc = require(x && y && out, "null argument")) return rc;
  return guarded([&] {
    *out = new l2b_dataset{l2boost::standardize(row_major_matrix(x, n, p),
                                                std::vector<double>(y, y + n), center_y != 0)};
  });
}

int l2b_dataset_set_truth(l2b_dataset* ds, const double* beta, size_t p) {
  if (int rc = require(ds && beta, "null argument")) return rc;
  return guarded([&] {
    if (p != ds->ds.p())
      l2boost::fail(l2boost::errc::length_mismatch, "truth length differs from p");
    ds->ds.true_beta.assign(beta, beta + p);
  });
}

size_t l2b_dataset_rows(const l2b_dataset* ds) { return ds ? ds->ds.n() : 0; }

size_t l2b_dataset_cols(const l2b_dataset* ds) { return ds ? ds->ds.p() : 0; }

const char* l2b_dataset_name(const l2b_dataset* ds, size_t j) {
  if (!ds || j >= ds->ds.names.size()) return nullptr;
  return ds->ds.names[j].c_str();
}

double l2b_dataset_mean(const l2b_dataset* ds, size_t j) {
  if (!ds || j >= ds->ds.means.size()) return std::nan("");
  return ds->ds.means[j];
}

double l2b_dataset_scale(const l2b_dataset* ds, size_t j) {
  if (!ds || j >= ds->ds.scales.size()) return std::nan("");
  return ds->ds.scales[j];
}

double l2b_dataset_y_center(const l2b_dataset* ds) { return ds ? ds->ds.y_center : std::nan(""); }

int l2b_dataset_predict(const l2b_dataset* ds, const double* beta, size_t p, double* out) {
  if (int rc = require(ds && beta && out, "null argument")) return rc;
  return guarded([&] {
    if (p != ds->ds.p()) l2boost::fail(l2boost::errc::length_mismatch, "beta length differs from p");
    const auto fitted = l2boost::predict(ds->ds, std::span<const double>(beta, p));
    std::memcpy(out, fitted.data(), fitted.size() * sizeof(double));
  });
}

int l2b_dataset_actual(const l2b_dataset* ds, double* out) {
  if (int rc = require(ds && out, "null argument")) return rc;
  for (size_t i = 0; i < ds->ds.y.size(); ++i) out[i] = ds->ds.y[i] + ds->ds.y_center;
  return L2B_OK;
}

int l2b_dataset_mse(const l2b_dataset* ds, const double* beta, size_t p, double* mse) {
  if (int rc = require(ds && beta && mse, "null argument")) return rc;
  return guarded([&] {
    if (p != ds->ds.p()) l2boost::fail(l2boost::errc::length_mismatch, "beta length differs from p");
    std::vector<double> r(ds->ds.y.begin(), ds->ds.y.end());
    for (size_t j = 0; j < p; ++j) {
      if (beta[j] == 0.0) continue;
      auto xj = ds->ds.x.col(j);
      for (size_t i = 0; i < r.size(); ++i) r[i] -= beta[j] * xj[i];
    }
    *mse = l2boost::norm_sq_n(r);
  });
}

void l2b_dataset_free(l2b_dataset* ds) { delete ds; }

/* -------------------------------------------------------------- boosting */

void l2b_stop_default(l2b_stop_spec* spec) {
  if (!spec) return;
  spec->kind = L2B_STOP_NONE;
  spec->m_fixed = 0;
  spec->k = 2;
  spec->s = 0;
  spec->cu = 4.5;
  spec->eta = 0.0;
  spec->lambda_n = 0.0;
  spec->c = 0.0;
  spec->theory_mode = 0;
}

int l2b_fit(const l2b_dataset* ds, int variant, double nu, long max_steps,
            const l2b_stop_spec* stop, l2b_path** out) {
  if (int rc = require(ds && out, "null argument")) return rc;
  return guarded([&] {
    l2boost::boost_config cfg;
    cfg.nu = nu;
    cfg.max_steps = max_steps;
    if (variant == L2B_PLAIN)
      cfg.kind = l2boost::variant::plain;
    else if (variant == L2B_ORTHOGONAL)
      cfg.kind = l2boost::variant::orthogonal;
    else
      l2boost::fail(l2boost::errc::invalid_argument, "unknown variant");
    const l2boost::stopping_rule rule = rule_from(stop);
    auto path = cfg.kind == l2boost::variant::plain ? l2boost::run_ba(ds->ds, cfg, rule)
                                                    : l2boost::run_oba(ds->ds, cfg, rule);
    *out = new l2b_path{std::move(path)};
  });
}

long l2b_path_models(const l2b_path* path) { return path ? path->path.models() : -1; }

long l2b_path_stop_step(const l2b_path* path) { return path ? path->path.stop_step : -1; }

const char* l2b_path_stop_reason(const l2b_path* path) {
  return path ? path->path.stop_reason.c_str() : nullptr;
}

double l2b_path_residual_sq(const l2b_path* path, long t) {
  if (!path || t < 0 || t > path->path.models()) return std::nan("");
  return path->path.residual_sq_at(t);
}

double l2b_path_pred_sq(const l2b_path* path, long t) {
  if (!path || t < 0 || t > path->path.models()) return std::nan("");
  return path->path.pred_sq_at(t);
}

int l2b_path_step(const l2b_path* path, long i, long* j, double* gamma, double* residual_sq,
                  char* label) {
  if (int rc = require(path != nullptr, "null path")) return rc;
  return guarded([&] {
    if (i < 0 || i >= path->path.models())
      l2boost::fail(l2boost::errc::invalid_argument, "step index out of range");
    const auto& st = path->path.steps[static_cast<size_t>(i)];
    if (j) *j = st.j;
    if (gamma) *gamma = st.gamma;
    if (residual_sq) *residual_sq = st.residual_sq;
    if (label) *label = st.label;
  });
}

int l2b_path_beta(const l2b_path* path, long t, double* beta, size_t p) {
  if (int rc = require(path && beta, "null argument")) return rc;
  return guarded([&] {
    if (p != static_cast<size_t>(path->path.p))
      l2boost::fail(l2boost::errc::length_mismatch, "buffer length differs from p");
    const auto b = path->path.beta_at(t);
    std::memcpy(beta, b.data(), b.size() * sizeof(double));
  });
}

long l2b_path_support(const l2b_path* path, long t, long* js, size_t cap) {
  if (!path) return -1;
  try {
    const auto support = path->path.support_at(t);
    if (js != nullptr)
      for (size_t i = 0; i < support.size() && i < cap; ++i) js[i] = support[i];
    return static_cast<long>(support.size());
  } catch (const l2boost::error& e) {
    g_last_error = e.what();
    return -1;
  }
}

int l2b_path_write_csv(const l2b_path* path, const char* file) {
  if (int rc = require(path && file, "null argument")) return rc;
  return guarded([&] { l2boost::write_path_csv(path->path, file); });
}

void l2b_path_free(l2b_path* path) { delete path; }

int l2b_post_refit(const l2b_dataset* ds, const long* support, size_t count, double* beta) {
  if (int rc = require(ds && beta && (support || count == 0), "null argument")) return rc;
  return guarded([&] {
    const auto coefs = l2boost::post_refit(ds->ds, std::span<const long>(support, count));
    std::memcpy(beta, coefs.data(), coefs.size() * sizeof(double));
  });
}

/* ----------------------------------------------------------------- lasso */

void l2b_lasso_default(l2b_lasso_spec* spec) {
  if (!spec) return;
  const l2boost::lasso_config cfg;
  spec->tol = cfg.convergence_tol;
  spec->max_sweeps = cfg.max_sweeps;
  spec->folds = cfg.folds;
  spec->grid_size = cfg.grid_size;
  spec->alpha = cfg.alpha;
}

int l2b_lasso_fit(const l2b_dataset* ds, double lambda, const l2b_lasso_spec* spec, double* beta,
                  int* converged) {
  if (int rc = require(ds && beta, "null argument")) return rc;
  return guarded([&] {
    const auto fit = l2boost::lasso_fit(ds->ds, lambda, lasso_from(spec));
    std::memcpy(beta, fit.beta.data(), fit.beta.size() * sizeof(double));
    if (converged) *converged = fit.converged ? 1 : 0;
  });
}

int l2b_lasso_plugin(const l2b_dataset* ds, const l2b_lasso_spec* spec, double* lambda,
                     double* sigma_hat) {
  if (int rc = require(ds && lambda, "null argument")) return rc;
  return guarded([&] {
    const l2boost::lasso_config cfg = lasso_from(spec);
    const double sigma0 = std::sqrt(l2boost::norm_sq_n(ds->ds.y));
    const auto pen = l2boost::plugin_lambda(ds->ds, cfg.alpha, sigma0, cfg);
    *lambda = pen.lambda;
    if (sigma_hat) *sigma_hat = pen.sigma_hat;
  });
}

int l2b_lasso_cv(const l2b_dataset* ds, const l2b_lasso_spec* spec, uint64_t seed, double* lambda) {
  if (int rc = require(ds && lambda, "null argument")) return rc;
  return guarded([&] {
    *lambda = l2boost::cv_lambda(ds->ds, lasso_from(spec), l2boost::rng_stream(seed, 0));
  });
}

/* ---------------------------------------------------------------- theory */

int l2b_theory_constants(double c, double* mu_a, double* mu_e, double* zeta_star,
                         double* lambda_star, double* rate) {
  return guarded([&] {
    const auto tc = l2boost::zeta_star(c);
    if (mu_a) *mu_a = tc.mu_a;
    if (mu_e) *mu_e = tc.mu_e;
    if (zeta_star) *zeta_star = tc.zeta_star;
    if (lambda_star) *lambda_star = tc.lambda_star;
    if (rate) *rate = tc.rate;
  });
}

int l2b_lambda_n(double sigma, long p, long n, double alpha, double* out) {
  if (int rc = require(out != nullptr, "null argument")) return rc;
  return guarded([&] { *out = l2boost::lambda_n(sigma, p, n, alpha); });
}

int l2b_eigen_scan(const l2b_dataset* ds, long s_max, long budget, uint64_t seed, l2b_eigen** out) {
  if (int rc = require(ds && out, "null argument")) return rc;
  return guarded([&] {
    *out = new l2b_eigen{l2boost::restricted_eigen_scan(ds->ds, s_max, budget, seed)};
  });
}

long l2b_eigen_sizes(const l2b_eigen* report) {
  return report ? static_cast<long>(report->report.phi_small.size()) : -1;
}

int l2b_eigen_row(const l2b_eigen* report, long s, double* phi_small, double* phi_large,
                  int* exhaustive) {
  if (int rc = require(report != nullptr, "null report")) return rc;
  return guarded([&] {
    const auto& r = report->report;
    if (s < 1 || s > static_cast<long>(r.phi_small.size()))
      l2boost::fail(l2boost::errc::invalid_argument, "size out of range");
    if (phi_small) *phi_small = r.phi_small[static_cast<size_t>(s - 1)];
    if (phi_large) *phi_large = r.phi_large[static_cast<size_t>(s - 1)];
    if (exhaustive) *exhaustive = r.size_exhaustive[static_cast<size_t>(s - 1)] ? 1 : 0;
  });
}

double l2b_eigen_c(const l2b_eigen* report) { return report ? report->report.c : std::nan(""); }

int l2b_eigen_degenerate(const l2b_eigen* report) {
  return report ? (report->report.degenerate ? 1 : 0) : -1;
}

int l2b_eigen_write_csv(const l2b_eigen* report, const char* file) {
  if (int rc = require(report && file, "null argument")) return rc;
  return guarded([&] { l2boost::write_eigen_csv(report->report, file); });
}

void l2b_eigen_free(l2b_eigen* report) { delete report; }

int l2b_pga_dataset(const double* design, size_t n, size_t p, const double* beta,
                    l2b_dataset** out) {
  if (int rc = require(design && beta && out, "null argument")) return rc;
  return guarded([&] {
    *out = new l2b_dataset{l2boost::pga_dataset(std::span<const double>(beta, p),
                                                row_major_matrix(design, n, p))};
  });
}

int l2b_pga_random(long n, long p, long s, int toeplitz, uint64_t seed, l2b_dataset** out) {
  if (int rc = require(out != nullptr, "null argument")) return rc;
  return guarded([&] {
    if (n < 2 || p < 1 || s < 0)
      l2boost::fail(l2boost::errc::invalid_argument, "need n >= 2, p >= 1, s >= 0");
    l2boost::dgp_spec dgp;
    dgp.n = static_cast<size_t>(n);
    dgp.p = static_cast<size_t>(p);
    dgp.s = static_cast<size_t>(s);
    dgp.betas = l2boost::beta_design::sparse;
    dgp.xs = toeplitz ? l2boost::x_design::toeplitz : l2boost::x_design::iid;
    dgp.noise_sd = 0.0;
    dgp.holdout = 1;
    *out = new l2b_dataset{l2boost::generate(dgp, seed, 0).train};
  });
}

int l2b_check_bounds(const l2b_dataset* ds, const l2b_path* path, const l2b_eigen* report,
                     double tolerance, double delta, double lambda_n, l2b_bounds** out) {
  if (int rc = require(ds && path && report && out, "null argument")) return rc;
  return guarded([&] {
    l2boost::bound_check_options opts;
    opts.tolerance = tolerance;
    opts.delta = delta;
    opts.lambda_n = lambda_n;
    *out = new l2b_bounds{l2boost::check_bounds(ds->ds, path->path, report->report, opts)};
  });
}

long l2b_bounds_count(const l2b_bounds* bounds) {
  return bounds ? static_cast<long>(bounds->reports.size()) : -1;
}

const char* l2b_bounds_name(const l2b_bounds* bounds, long i) {
  if (!bounds || i < 0 || i >= static_cast<long>(bounds->reports.size())) return nullptr;
  return bounds->reports[static_cast<size_t>(i)].name.c_str();
}

int l2b_bounds_flags(const l2b_bounds* bounds, long i, int* violated, int* advisory, long* skipped,
                     double* worst_slack) {
  if (int rc = require(bounds != nullptr, "null bounds")) return rc;
  return guarded([&] {
    if (i < 0 || i >= static_cast<long>(bounds->reports.size()))
      l2boost::fail(l2boost::errc::invalid_argument, "bound index out of range");
    const auto& r = bounds->reports[static_cast<size_t>(i)];
    if (violated) *violated = r.violated ? 1 : 0;
    if (advisory) *advisory = r.advisory ? 1 : 0;
    if (skipped) *skipped = r.skipped_steps;
    if (worst_slack) *worst_slack = r.worst_slack;
  });
}

int l2b_bounds_write_csv(const l2b_bounds* bounds, const char* file) {
  if (int rc = require(bounds && file, "null argument")) return rc;
  return guarded([&] { l2boost::write_bounds_csv(bounds->reports, file); });
}

void l2b_bounds_free(l2b_bounds* bounds) { delete bounds; }

/* ------------------------------------------------------------ simulation */

int l2b_preset_json(const char* name, char** out) {
  if (int rc = require(name && out, "null argument")) return rc;
  return guarded([&] {
    *out = alloc_string(l2boost::preset_json(name));
    if (*out == nullptr) l2boost::fail(l2boost::errc::io_error, "allocation failed");
  });
}

int l2b_experiments_resolved_json(const char* spec_json, char** out) {
  if (int rc = require(spec_json && out, "null argument")) return rc;
  return guarded([&] {
    const auto specs = l2boost::experiments_from_json(spec_json);
    std::string text = "[";
    for (size_t i = 0; i < specs.size(); ++i) {
      if (i) text += ",\n";
      text += l2boost::experiment_to_json(specs[i]);
    }
    text += "]";
    *out = alloc_string(text);
    if (*out == nullptr) l2boost::fail(l2boost::errc::io_error, "allocation failed");
  });
}

int l2b_run_experiments_json(const char* spec_json, int workers, l2b_table** out) {
  if (int rc = require(spec_json && out, "null argument")) return rc;
  return guarded([&] {
    const auto specs = l2boost::experiments_from_json(spec_json);
    l2boost::result_table all;
    for (const auto& spec : specs) {
      auto table = l2boost::run_experiment(spec, workers);
      for (auto& row : table.rows) all.rows.push_back(std::move(row));
    }
    *out = new l2b_table{std::move(all)};
  });
}

long l2b_table_rows(const l2b_table* table) {
  return table ? static_cast<long>(table->table.rows.size()) : -1;
}

const char* l2b_table_method(const l2b_table* table, long row) {
  if (!table || row < 0 || row >= static_cast<long>(table->table.rows.size())) return nullptr;
  return table->table.rows[static_cast<size_t>(row)].method.c_str();
}

const char* l2b_table_beta_design(const l2b_table* table, long row) {
  if (!table || row < 0 || row >= static_cast<long>(table->table.rows.size())) return nullptr;
  switch (table->table.rows[static_cast<size_t>(row)].dgp.betas) {
    case l2boost::beta_design::sparse: return "sparse";
    case l2boost::beta_design::polynomial: return "polynomial";
    case l2boost::beta_design::illustrative: return "illustrative";
  }
  return nullptr;
}

const char* l2b_table_x_design(const l2b_table* table, long row) {
  if (!table || row < 0 || row >= static_cast<long>(table->table.rows.size())) return nullptr;
  return table->table.rows[static_cast<size_t>(row)].dgp.xs == l2boost::x_design::iid ? "iid"
                                                                                      : "toeplitz";
}

int l2b_table_dgp(const l2b_table* table, long row, long* n, long* p, long* s, double* noise_sd,
                  long* holdout) {
  if (int rc = require(table != nullptr, "null table")) return rc;
  return guarded([&] {
    if (row < 0 || row >= static_cast<long>(table->table.rows.size()))
      l2boost::fail(l2boost::errc::invalid_argument, "row out of range");
    const auto& d = table->table.rows[static_cast<size_t>(row)].dgp;
    if (n) *n = static_cast<long>(d.n);
    if (p) *p = static_cast<long>(d.p);
    if (s) *s = static_cast<long>(d.s);
    if (noise_sd) *noise_sd = d.noise_sd;
    if (holdout) *holdout = static_cast<long>(d.holdout);
  });
}

int l2b_table_row(const l2b_table* table, long row, double* mse_mean, double* mse_se,
                  double* mean_stop, double* mean_support, long* failures) {
  if (int rc = require(table != nullptr, "null table")) return rc;
  return guarded([&] {
    if (row < 0 || row >= static_cast<long>(table->table.rows.size()))
      l2boost::fail(l2boost::errc::invalid_argument, "row out of range");
    const auto& r = table->table.rows[static_cast<size_t>(row)];
    if (mse_mean) *mse_mean = r.mse_mean;
    if (mse_se) *mse_se = r.mse_se;
    if (mean_stop) *mean_stop = r.mean_stop_step;
    if (mean_support) *mean_support = r.mean_support;
    if (failures) *failures = r.failures;
  });
}

int l2b_table_write_csv(const l2b_table* table, const char* file) {
  if (int rc = require(table && file, "null argument")) return rc;
  return guarded([&] { l2boost::write_table_csv(table->table, file); });
}

void l2b_table_free(l2b_table* table) { delete table; }

int l2b_step_curve_json(const char* spec_json, int workers, l2b_curve** out) {
  if (int rc = require(spec_json && out, "null argument")) return rc;
  return guarded([&] {
    const auto spec = l2boost::curve_from_json(spec_json);
    *out = new l2b_curve{l2boost::step_curve(spec, workers)};
  });
}

int l2b_curve_resolved_json(const char* spec_json, char** out) {
  if (int rc = require(spec_json && out, "null argument")) return rc;
  return guarded([&] {
    const auto spec = l2boost::curve_from_json(spec_json);
    *out = alloc_string(l2boost::curve_to_json(spec));
    if (*out == nullptr) l2boost::fail(l2boost::errc::io_error, "allocation failed");
  });
}

long l2b_curve_len(const l2b_curve* curve) {
  return curve ? static_cast<long>(curve->curve.mse_out.size()) : -1;
}

int l2b_curve_point(const l2b_curve* curve, long m, double* mse_in, double* mse_out) {
  if (int rc = require(curve != nullptr, "null curve")) return rc;
  return guarded([&] {
    if (m < 0 || m >= static_cast<long>(curve->curve.mse_out.size()))
      l2boost::fail(l2boost::errc::invalid_argument, "model index out of range");
    if (mse_in) *mse_in = curve->curve.mse_in[static_cast<size_t>(m)];
    if (mse_out) *mse_out = curve->curve.mse_out[static_cast<size_t>(m)];
  });
}

int l2b_curve_refs(const l2b_curve* curve, double* ols_ref, double* lasso_ref, double* ratio_mse,
                   double* ratio_step) {
  if (int rc = require(curve != nullptr, "null curve")) return rc;
  if (ols_ref) *ols_ref = curve->curve.ols_ref;
  if (lasso_ref) *lasso_ref = curve->curve.lasso_ref;
  if (ratio_mse) *ratio_mse = curve->curve.ratio_stop_mse;
  if (ratio_step) *ratio_step = curve->curve.ratio_stop_step;
  return L2B_OK;
}

int l2b_curve_write_csv(const l2b_curve* curve, const char* file) {
  if (int rc = require(curve && file, "null argument")) return rc;
  return guarded([&] { l2boost::write_curve_csv(curve->curve, file); });
}

void l2b_curve_free(l2b_curve* curve) { delete curve; }

} /* extern "C" */
