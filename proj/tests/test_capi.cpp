// Exercises the shared library strictly through its C surface.
#include "l2boost/l2boost.h"

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace {

std::string temp_file(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  f << text;
}

std::string small_csv() {
  const std::string path = temp_file("l2b_capi_data.csv");
  std::string text = "x1,x2,x3,y\n";
  // deterministic pseudo-data: y tracks x1 with a small nonlinear wobble
  double state = 0.5;
  for (int i = 0; i < 30; ++i) {
    state = std::fmod(state * 997.0 + 0.1234, 1.0);
    const double a = state * 2.0 - 1.0;
    state = std::fmod(state * 997.0 + 0.1234, 1.0);
    const double b = state * 2.0 - 1.0;
    state = std::fmod(state * 997.0 + 0.1234, 1.0);
    const double c = state * 2.0 - 1.0;
    const double y = 2.0 * a - b + 0.1 * c * c;
    char buf[160];
    std::snprintf(buf, sizeof buf, "%.10f,%.10f,%.10f,%.10f\n", a, b, c, y);
    text += buf;
  }
  write_file(path, text);
  return path;
}

} // namespace

TEST_SUITE_BEGIN("capi");

TEST_CASE("version and error text are always available") {
  CHECK(l2b_version() != nullptr);
  CHECK(std::strlen(l2b_version()) > 0);
  CHECK(l2b_last_error() != nullptr);
}

TEST_CASE("csv loading reports typed failures through the status code") {
  l2b_dataset* ds = nullptr;
  CHECK(l2b_dataset_from_csv("/nonexistent/file.csv", "y", 1, &ds) == L2B_E_IO);
  CHECK(ds == nullptr);
  CHECK(std::strlen(l2b_last_error()) > 0);

  const std::string path = small_csv();
  CHECK(l2b_dataset_from_csv(path.c_str(), "zzz", 1, &ds) == L2B_E_MISSING_COLUMN);
  CHECK(l2b_dataset_from_csv(path.c_str(), "y", 1, &ds) == L2B_OK);
  REQUIRE(ds != nullptr);
  CHECK(l2b_dataset_rows(ds) == 30);
  CHECK(l2b_dataset_cols(ds) == 3);
  CHECK(std::string(l2b_dataset_name(ds, 0)) == "x1");
  CHECK(std::string(l2b_dataset_name(ds, 2)) == "x3");
  CHECK(l2b_dataset_scale(ds, 0) > 0.0);
  l2b_dataset_free(ds);
  std::remove(path.c_str());
}

TEST_CASE("standardize-from-memory fits and predicts end to end") {
  // row-major 8x2
  const double x[16] = {1, 2, 2, 1, 3, 4, 4, 3, 5, 6, 6, 5, 7, 9, 9, 7};
  double y[8];
  for (int i = 0; i < 8; ++i) y[i] = 1.5 * x[2 * i] - 0.5 * x[2 * i + 1];
  l2b_dataset* ds = nullptr;
  REQUIRE(l2b_dataset_standardize(x, 8, 2, y, 1, &ds) == L2B_OK);
  CHECK(l2b_dataset_rows(ds) == 8);
  CHECK(l2b_dataset_cols(ds) == 2);

  l2b_path* path = nullptr;
  REQUIRE(l2b_fit(ds, L2B_ORTHOGONAL, 1.0, 10, nullptr, &path) == L2B_OK);
  CHECK(l2b_path_models(path) >= 1);
  CHECK(l2b_path_models(path) <= 2);

  std::vector<double> beta(2);
  REQUIRE(l2b_path_beta(path, l2b_path_models(path), beta.data(), 2) == L2B_OK);

  std::vector<double> fitted(8), actual(8);
  REQUIRE(l2b_dataset_predict(ds, beta.data(), 2, fitted.data()) == L2B_OK);
  REQUIRE(l2b_dataset_actual(ds, actual.data()) == L2B_OK);
  for (int i = 0; i < 8; ++i) CHECK(fitted[i] == doctest::Approx(actual[i]).epsilon(1e-6));

  double mse = 0.0;
  REQUIRE(l2b_dataset_mse(ds, beta.data(), 2, &mse) == L2B_OK);
  CHECK(mse < 1e-10);

  l2b_path_free(path);
  l2b_dataset_free(ds);
}

TEST_CASE("stop specs drive the fit and the path reports its reason") {
  const std::string path_csv = small_csv();
  l2b_dataset* ds = nullptr;
  REQUIRE(l2b_dataset_from_csv(path_csv.c_str(), "y", 1, &ds) == L2B_OK);

  l2b_stop_spec stop;
  l2b_stop_default(&stop);
  stop.kind = L2B_STOP_FIXED;
  stop.m_fixed = 4;
  l2b_path* path = nullptr;
  REQUIRE(l2b_fit(ds, L2B_PLAIN, 0.5, 100, &stop, &path) == L2B_OK);
  CHECK(l2b_path_models(path) == 4);
  CHECK(l2b_path_stop_step(path) == 4);
  CHECK(std::string(l2b_path_stop_reason(path)) == "fixed-steps");

  long j = -1;
  double gamma = 0.0, resid = 0.0;
  char label = 0;
  REQUIRE(l2b_path_step(path, 0, &j, &gamma, &resid, &label) == L2B_OK);
  CHECK(j >= 0);
  CHECK(j < 3);
  CHECK(resid > 0.0);
  CHECK((label == 'N' || label == 'R'));
  CHECK(l2b_path_residual_sq(path, 0) > l2b_path_residual_sq(path, 4));

  // support of the stopped model, two-call pattern
  const long count = l2b_path_support(path, 4, nullptr, 0);
  REQUIRE(count >= 1);
  std::vector<long> js(static_cast<std::size_t>(count));
  CHECK(l2b_path_support(path, 4, js.data(), js.size()) == count);

  std::vector<double> refit(3);
  REQUIRE(l2b_post_refit(ds, js.data(), js.size(), refit.data()) == L2B_OK);
  for (long k = 0; k < 3; ++k) {
    bool in = false;
    for (long v : js) in = in || v == k;
    if (!in) CHECK(refit[k] == 0.0);
  }

  const std::string out = temp_file("l2b_capi_path.csv");
  REQUIRE(l2b_path_write_csv(path, out.c_str()) == L2B_OK);
  std::ifstream f(out);
  std::string header;
  std::getline(f, header);
  CHECK(header == "m,j,gamma,residual_sq,pred_sq,label");
  f.close();
  std::remove(out.c_str());

  l2b_path_free(path);

  // orthogonal runs never repeat and stop at the column count
  REQUIRE(l2b_fit(ds, L2B_ORTHOGONAL, 1.0, 100, nullptr, &path) == L2B_OK);
  CHECK(l2b_path_models(path) <= 3);
  l2b_path_free(path);
  l2b_dataset_free(ds);
  std::remove(path_csv.c_str());
}

TEST_CASE("invalid stop parameters surface as threshold errors") {
  const std::string path_csv = small_csv();
  l2b_dataset* ds = nullptr;
  REQUIRE(l2b_dataset_from_csv(path_csv.c_str(), "y", 1, &ds) == L2B_OK);
  l2b_stop_spec stop;
  l2b_stop_default(&stop);
  stop.kind = L2B_STOP_RATIO;
  stop.cu = -1.0;
  l2b_path* path = nullptr;
  CHECK(l2b_fit(ds, L2B_PLAIN, 1.0, 50, &stop, &path) == L2B_E_INVALID_THRESHOLD);
  CHECK(path == nullptr);
  l2b_dataset_free(ds);
  std::remove(path_csv.c_str());
}

TEST_CASE("lasso api fits, tunes, and refits") {
  const std::string path_csv = small_csv();
  l2b_dataset* ds = nullptr;
  REQUIRE(l2b_dataset_from_csv(path_csv.c_str(), "y", 1, &ds) == L2B_OK);

  l2b_lasso_spec spec;
  l2b_lasso_default(&spec);
  CHECK(spec.folds == 10);
  CHECK(spec.alpha == 0.05);
  spec.folds = 5;

  double lambda = 0.0, sigma = 0.0;
  REQUIRE(l2b_lasso_plugin(ds, &spec, &lambda, &sigma) == L2B_OK);
  CHECK(lambda > 0.0);
  CHECK(sigma > 0.0);

  std::vector<double> beta(3);
  int converged = 0;
  REQUIRE(l2b_lasso_fit(ds, lambda, &spec, beta.data(), &converged) == L2B_OK);
  CHECK(converged == 1);

  double cv = 0.0;
  REQUIRE(l2b_lasso_cv(ds, &spec, 17, &cv) == L2B_OK);
  CHECK(cv > 0.0);
  double cv2 = 0.0;
  REQUIRE(l2b_lasso_cv(ds, &spec, 17, &cv2) == L2B_OK);
  CHECK(cv == cv2);

  CHECK(l2b_lasso_fit(ds, -1.0, &spec, beta.data(), &converged) == L2B_E_INVALID_ARGUMENT);
  l2b_dataset_free(ds);
  std::remove(path_csv.c_str());
}

TEST_CASE("theory constants and the noise level match the core closed forms") {
  double mu_a = 0.0, mu_e = 0.0, zeta = 0.0, lambda = 0.0, rate = 0.0;
  REQUIRE(l2b_theory_constants(0.0, &mu_a, &mu_e, &zeta, &lambda, &rate) == L2B_OK);
  CHECK(mu_a == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(mu_e == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-12));
  CHECK(zeta == doctest::Approx(1.1867).epsilon(2e-4));
  CHECK(rate == doctest::Approx(0.5427).epsilon(2e-4));
  CHECK(l2b_theory_constants(0.9, &mu_a, &mu_e, &zeta, &lambda, &rate) == L2B_E_DOMAIN);

  double ln = 0.0;
  REQUIRE(l2b_lambda_n(1.0, 50, 100, 0.05, &ln) == L2B_OK);
  CHECK(ln == doctest::Approx(2.0 * std::sqrt(std::log(2000.0) / 100.0)).epsilon(1e-12));
}

TEST_CASE("pga helpers build noiseless designs and bounds reports") {
  l2b_dataset* ds = nullptr;
  REQUIRE(l2b_pga_random(40, 8, 3, 0, 5, &ds) == L2B_OK);
  CHECK(l2b_dataset_rows(ds) == 40);
  CHECK(l2b_dataset_cols(ds) == 8);

  l2b_path* path = nullptr;
  REQUIRE(l2b_fit(ds, L2B_PLAIN, 1.0, 30, nullptr, &path) == L2B_OK);

  l2b_eigen* eig = nullptr;
  REQUIRE(l2b_eigen_scan(ds, 5, 500, 0, &eig) == L2B_OK);
  CHECK(l2b_eigen_sizes(eig) == 5);
  double phi_small = 0.0, phi_large = 0.0;
  int exhaustive = 0;
  REQUIRE(l2b_eigen_row(eig, 1, &phi_small, &phi_large, &exhaustive) == L2B_OK);
  CHECK(phi_small == doctest::Approx(1.0).epsilon(1e-10)); // size-1 Gram of unit columns
  CHECK(exhaustive == 1);
  CHECK(l2b_eigen_c(eig) >= 0.0);
  CHECK(l2b_eigen_c(eig) < 1.0);

  l2b_bounds* bounds = nullptr;
  REQUIRE(l2b_check_bounds(ds, path, eig, 1e-8, 0.05, 0.0, &bounds) == L2B_OK);
  REQUIRE(l2b_bounds_count(bounds) >= 4);
  bool saw_ratio = false;
  for (long i = 0; i < l2b_bounds_count(bounds); ++i) {
    const char* name = l2b_bounds_name(bounds, i);
    int violated = 0, advisory = 0;
    long skipped = 0;
    double slack = 0.0;
    REQUIRE(l2b_bounds_flags(bounds, i, &violated, &advisory, &skipped, &slack) == L2B_OK);
    if (std::string(name) == "step-ratio") {
      saw_ratio = true;
      CHECK(violated == 0);
    }
  }
  CHECK(saw_ratio);

  l2b_bounds_free(bounds);
  l2b_eigen_free(eig);
  l2b_path_free(path);
  l2b_dataset_free(ds);
}

TEST_CASE("experiment json runs through the api with worker independence") {
  const char* spec = R"({
    "dgp": {"n": 25, "p": 8, "s": 2, "holdout": 15},
    "methods": [{"estimator": "ba", "stop": "oracle"},
                {"estimator": "lasso", "penalty": "plugin"}],
    "repetitions": 3,
    "master_seed": 5,
    "max_steps": 20
  })";

  char* resolved = nullptr;
  REQUIRE(l2b_experiments_resolved_json(spec, &resolved) == L2B_OK);
  REQUIRE(resolved != nullptr);
  CHECK(std::string(resolved).find("\"n\": 25") != std::string::npos);
  l2b_string_free(resolved);

  l2b_table* t1 = nullptr;
  l2b_table* t2 = nullptr;
  REQUIRE(l2b_run_experiments_json(spec, 1, &t1) == L2B_OK);
  REQUIRE(l2b_run_experiments_json(spec, 3, &t2) == L2B_OK);
  REQUIRE(l2b_table_rows(t1) == 2);
  REQUIRE(l2b_table_rows(t2) == 2);
  for (long i = 0; i < 2; ++i) {
    double m1 = 0.0, se1 = 0.0, st1 = 0.0, su1 = 0.0;
    double m2 = 0.0, se2 = 0.0, st2 = 0.0, su2 = 0.0;
    long f1 = 0, f2 = 0;
    REQUIRE(l2b_table_row(t1, i, &m1, &se1, &st1, &su1, &f1) == L2B_OK);
    REQUIRE(l2b_table_row(t2, i, &m2, &se2, &st2, &su2, &f2) == L2B_OK);
    CHECK(m1 == m2);
    CHECK(se1 == se2);
    CHECK(st1 == st2);
    CHECK(su1 == su2);
    CHECK(f1 == 0);
    CHECK(f2 == 0);
  }
  CHECK(std::string(l2b_table_method(t1, 0)) == "ba-oracle");
  CHECK(std::string(l2b_table_method(t1, 1)) == "lasso-plugin");

  const std::string out = temp_file("l2b_capi_table.csv");
  REQUIRE(l2b_table_write_csv(t1, out.c_str()) == L2B_OK);
  std::ifstream f(out);
  std::string line;
  std::getline(f, line);
  CHECK(line.find("mse_mean") != std::string::npos);
  f.close();
  std::remove(out.c_str());

  l2b_table_free(t1);
  l2b_table_free(t2);

  l2b_table* bad = nullptr;
  CHECK(l2b_run_experiments_json("{broken", 1, &bad) == L2B_E_PARSE);
}

TEST_CASE("curve json runs and exposes per-step points") {
  const char* spec = R"({
    "dgp": {"n": 20, "p": 6, "s": 2, "holdout": 10},
    "repetitions": 3,
    "max_steps": 8,
    "master_seed": 9
  })";
  l2b_curve* curve = nullptr;
  REQUIRE(l2b_step_curve_json(spec, 1, &curve) == L2B_OK);
  REQUIRE(l2b_curve_len(curve) == 9);
  double in0 = 0.0, out0 = 0.0, in8 = 0.0, out8 = 0.0;
  REQUIRE(l2b_curve_point(curve, 0, &in0, &out0) == L2B_OK);
  REQUIRE(l2b_curve_point(curve, 8, &in8, &out8) == L2B_OK);
  CHECK(in0 > 0.0);
  CHECK(out0 > 0.0);
  CHECK(in8 < in0); // boosting moves toward the truth on a strong sparse signal
  double ols = 0.0, lasso = 0.0, rmse = 0.0, rstep = 0.0;
  REQUIRE(l2b_curve_refs(curve, &ols, &lasso, &rmse, &rstep) == L2B_OK);
  CHECK(std::isfinite(lasso));
  l2b_curve_free(curve);
}

TEST_CASE("presets round-trip through the capi allocator") {
  char* text = nullptr;
  REQUIRE(l2b_preset_json("table3", &text) == L2B_OK);
  REQUIRE(text != nullptr);
  CHECK(std::string(text).find("\"dgps\"") != std::string::npos);
  l2b_string_free(text);
  CHECK(l2b_preset_json("nonsense", &text) == L2B_E_INVALID_ARGUMENT);
}

TEST_SUITE_END();
