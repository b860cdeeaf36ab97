#pragma once

#include "dataset.hpp"
#include "rng.hpp"

#include <vector>

namespace l2boost {

struct lasso_config {
  double convergence_tol = 1e-7;
  long max_sweeps = 1000;
  long folds = 10;
  long grid_size = 100;
  double alpha = 0.05;

  void validate() const;
};

struct lasso_result {
  std::vector<double> beta;
  bool converged = false;
  long sweeps = 0;
};

// Minimizes (1/(2n)) ||y - X beta||^2 + lambda * ||beta||_1 by cyclic
// coordinate descent (ascending index, deterministic). Penalty values are
// tied to this 1/(2n) normalization.
lasso_result lasso_fit(const dataset& ds, double lambda, const lasso_config& cfg = {});

// Worst stationarity violation of the solution: |g_j - lambda*sign| on the
// support and max(0, |g_j| - lambda) off it, where g_j = <x_j, r>_n.
double lasso_kkt_violation(const dataset& ds, std::span<const double> beta, double lambda);

// Smallest penalty that zeroes every coefficient: max_j |<x_j, y>_n|.
double lambda_max(const dataset& ds);

struct plugin_penalty {
  double lambda = 0.0;
  double sigma_hat = 0.0;
  long iterations = 0;
};

// lambda = 1.1 * sigma_hat * qnorm(1 - alpha/(2p)) / sqrt(n), with sigma_hat
// refined by at most five fit-then-reestimate rounds from the given start.
plugin_penalty plugin_lambda(const dataset& ds, double alpha, double sigma0, const lasso_config& cfg = {});

// K-fold cross validation over a log grid from lambda_max down to
// lambda_max / 1e3; fold assignment is drawn from the stream.
double cv_lambda(const dataset& ds, const lasso_config& cfg, rng_stream stream);

// OLS refit on the support of beta_hat, zeros elsewhere.
std::vector<double> post_lasso(const dataset& ds, std::span<const double> beta_hat);

// Inverse standard normal CDF (rational approximation polished by one
// Newton step on erfc; ~1e-13 absolute over the usual range).
double normal_quantile(double prob);

} // namespace l2boost
