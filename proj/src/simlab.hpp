#pragma once

#include "boosting.hpp"
#include "dataset.hpp"
#include "lasso.hpp"

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace l2boost {

enum class beta_design { sparse, polynomial, illustrative };
enum class x_design { iid, toeplitz };

std::string to_string(beta_design d);
std::string to_string(x_design d);
beta_design beta_design_from(const std::string& token);
x_design x_design_from(const std::string& token);

struct dgp_spec {
  std::size_t n = 100;
  std::size_t p = 100;
  std::size_t s = 10;
  beta_design betas = beta_design::sparse;
  x_design xs = x_design::iid;
  double noise_sd = 1.0;
  std::size_t holdout = 50;

  void validate() const;
  std::vector<double> coefficients() const; // raw-basis true coefficients, length p
};

struct sample {
  dataset train;
  dataset holdout;
};

// Lower Cholesky factor of the population design covariance (identity for
// iid); compute once and reuse across repetitions via generate_with.
matrix design_chol(const dgp_spec& dgp);

// Repetition r draws the training set from substream 2r and the holdout from
// substream 2r+1; both are standardized with the training statistics and
// carry the true coefficients mapped into that basis.
sample generate(const dgp_spec& dgp, std::uint64_t master_seed, std::uint64_t rep);
sample generate_with(const dgp_spec& dgp, const matrix& chol, std::uint64_t master_seed,
                     std::uint64_t rep);

// (1/n1) sum_i (x_i' (true_beta - beta_hat))^2 over the holdout rows.
double mse_out(const dataset& holdout, std::span<const double> beta_hat);

enum class estimator_kind { ba, post_ba, oba, lasso, post_lasso };
enum class rule_kind { oracle, ks, ratio, fixed };
enum class penalty_kind { plugin, cv };

struct method_spec {
  estimator_kind estimator = estimator_kind::ba;
  rule_kind rule = rule_kind::oracle;       // boosting estimators only
  penalty_kind penalty = penalty_kind::plugin; // lasso estimators only
  long k = 2;
  long m_fixed = 0;
  double cu = 4.5;
  double alpha = 0.05;

  bool is_lasso() const;
  std::string name() const;
  void validate() const;
};

struct experiment_spec {
  dgp_spec dgp;
  std::vector<method_spec> methods;
  long repetitions = 100;
  std::uint64_t master_seed = 1;
  long max_steps = 1000;
  double nu = 1.0;
  lasso_config lasso;

  void validate() const;
};

struct result_row {
  dgp_spec dgp;
  std::string method;
  long repetitions = 0;
  long failures = 0; // repetitions excluded from the means below
  double mse_mean = std::numeric_limits<double>::quiet_NaN();
  double mse_se = std::numeric_limits<double>::quiet_NaN();
  double mean_stop_step = std::numeric_limits<double>::quiet_NaN();
  double mean_support = std::numeric_limits<double>::quiet_NaN();
};

struct result_table {
  std::vector<result_row> rows;
};

// Every method sees the same data within a repetition; per-method failures
// are excluded with a count and never abort the table. Output is
// bit-identical for any worker count.
result_table run_experiment(const experiment_spec& spec, int workers = 1);

struct curve_spec {
  dgp_spec dgp;
  long repetitions = 60;
  long max_steps = 40;
  double nu = 1.0;
  variant kind = variant::plain;
  double cu = 4.5;
  std::uint64_t master_seed = 1;
  lasso_config lasso;

  void validate() const;
};

struct curve_table {
  std::vector<double> mse_in;  // model-indexed, length max_steps + 1
  std::vector<double> mse_out; // mean over repetitions; path held flat past termination
  double ols_ref = std::numeric_limits<double>::quiet_NaN();   // only when p < n
  double lasso_ref = std::numeric_limits<double>::quiet_NaN(); // cross-validated penalty
  double ratio_stop_mse = std::numeric_limits<double>::quiet_NaN();
  double ratio_stop_step = std::numeric_limits<double>::quiet_NaN();
  long repetitions = 0;
  long failures = 0;
};

curve_table step_curve(const curve_spec& spec, int workers = 1);

// JSON boundaries. A spec file holds either "dgp" (one experiment) or
// "dgps" (a list; entry i runs with master_seed + i).
experiment_spec experiment_from_json(const std::string& text);
std::vector<experiment_spec> experiments_from_json(const std::string& text);
curve_spec curve_from_json(const std::string& text);
std::string experiment_to_json(const experiment_spec& spec);
std::string curve_to_json(const curve_spec& spec);

// Canned spec files: "table3" (experiment grid), "illustrative" (curve).
std::string preset_json(const std::string& name);

void write_table_csv(const result_table& table, const std::string& path);
void write_curve_csv(const curve_table& curve, const std::string& path);

} // namespace l2boost
