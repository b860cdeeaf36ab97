#include "lasso.hpp"

#include "boosting.hpp"
#include "errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace l2boost {

void lasso_config::validate() const {
  if (!(convergence_tol > 0.0) || !std::isfinite(convergence_tol))
    fail(errc::invalid_argument, "lasso convergence tolerance must be positive");
  if (max_sweeps < 1) fail(errc::invalid_argument, "lasso max_sweeps must be at least 1");
  if (folds < 2) fail(errc::invalid_argument, "cross validation needs at least 2 folds");
  if (grid_size < 2) fail(errc::invalid_argument, "penalty grid needs at least 2 points");
  if (!(alpha > 0.0 && alpha < 1.0)) fail(errc::invalid_argument, "alpha must lie in (0, 1)");
}

namespace {

double soft_threshold(double z, double t) {
  if (z > t) return z - t;
  if (z < -t) return z + t;
  return 0.0;
}

struct cd_problem {
  const matrix* x;
  std::span<const double> y;
  std::vector<double> msq; // E_n[x_j^2], > 0 for every usable column
};

cd_problem make_problem(const matrix& x, std::span<const double> y) {
  cd_problem pb;
  pb.x = &x;
  pb.y = y;
  pb.msq.resize(x.cols());
  for (std::size_t j = 0; j < x.cols(); ++j) {
    pb.msq[j] = norm_sq_n(x.col(j));
    if (!(pb.msq[j] > 0.0))
      fail(errc::constant_column, "column " + std::to_string(j) + " has zero variance");
  }
  return pb;
}

// Cyclic coordinate descent with an explicit residual vector; beta is used
// as the warm start and overwritten in place.
lasso_result cd_solve(const cd_problem& pb, double lambda, std::vector<double>& beta,
                      const lasso_config& cfg) {
  const matrix& x = *pb.x;
  const std::size_t n = x.rows();
  const std::size_t p = x.cols();

  std::vector<double> r(pb.y.begin(), pb.y.end());
  for (std::size_t j = 0; j < p; ++j) {
    if (beta[j] == 0.0) continue;
    auto xj = x.col(j);
    for (std::size_t i = 0; i < n; ++i) r[i] -= beta[j] * xj[i];
  }

  lasso_result out;
  for (long sweep = 0; sweep < cfg.max_sweeps; ++sweep) {
    double max_change = 0.0;
    for (std::size_t j = 0; j < p; ++j) {
      auto xj = x.col(j);
      double rho = 0.0;
      for (std::size_t i = 0; i < n; ++i) rho += xj[i] * r[i];
      rho = rho / static_cast<double>(n) + pb.msq[j] * beta[j];
      const double bj = soft_threshold(rho, lambda) / pb.msq[j];
      const double diff = bj - beta[j];
      if (diff != 0.0) {
        for (std::size_t i = 0; i < n; ++i) r[i] -= diff * xj[i];
        beta[j] = bj;
      }
      max_change = std::max(max_change, std::fabs(diff));
    }
    ++out.sweeps;
    if (max_change < cfg.convergence_tol) {
      out.converged = true;
      break;
    }
  }
  out.beta = beta;
  return out;
}

} // namespace

lasso_result lasso_fit(const dataset& ds, double lambda, const lasso_config& cfg) {
  cfg.validate();
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    fail(errc::invalid_argument, "lasso penalty must be a finite nonneg number");
  cd_problem pb = make_problem(ds.x, ds.y);
  std::vector<double> beta(ds.p(), 0.0);
  return cd_solve(pb, lambda, beta, cfg);
}

double lasso_kkt_violation(const dataset& ds, std::span<const double> beta, double lambda) {
  if (beta.size() != ds.p()) fail(errc::length_mismatch, "coefficient length != p");
  std::vector<double> r(ds.y.begin(), ds.y.end());
  for (std::size_t j = 0; j < ds.p(); ++j) {
    if (beta[j] == 0.0) continue;
    auto xj = ds.x.col(j);
    for (std::size_t i = 0; i < ds.n(); ++i) r[i] -= beta[j] * xj[i];
  }
  double worst = 0.0;
  for (std::size_t j = 0; j < ds.p(); ++j) {
    const double g = inner_n(ds.x.col(j), r);
    if (beta[j] > 0.0)
      worst = std::max(worst, std::fabs(g - lambda));
    else if (beta[j] < 0.0)
      worst = std::max(worst, std::fabs(g + lambda));
    else
      worst = std::max(worst, std::fabs(g) - lambda);
  }
  return worst;
}

double lambda_max(const dataset& ds) {
  double lm = 0.0;
  for (std::size_t j = 0; j < ds.p(); ++j) lm = std::max(lm, std::fabs(inner_n(ds.x.col(j), ds.y)));
  return lm;
}

plugin_penalty plugin_lambda(const dataset& ds, double alpha, double sigma0, const lasso_config& cfg) {
  cfg.validate();
  if (!(alpha > 0.0 && alpha < 1.0)) fail(errc::invalid_argument, "alpha must lie in (0, 1)");
  if (!(sigma0 > 0.0) || !std::isfinite(sigma0))
    fail(errc::invalid_argument, "initial noise scale must be positive");

  const double n = static_cast<double>(ds.n());
  const double p = static_cast<double>(ds.p());
  const double q = normal_quantile(1.0 - alpha / (2.0 * p));
  const double floor = 1e-12 * std::max(1.0, sigma0);

  plugin_penalty out;
  out.sigma_hat = sigma0;
  out.lambda = 1.1 * out.sigma_hat * q / std::sqrt(n);
  for (int it = 0; it < 5; ++it) {
    lasso_result fit = lasso_fit(ds, out.lambda, cfg);
    ++out.iterations;
    std::vector<double> r(ds.y.begin(), ds.y.end());
    for (std::size_t j = 0; j < ds.p(); ++j) {
      if (fit.beta[j] == 0.0) continue;
      auto xj = ds.x.col(j);
      for (std::size_t i = 0; i < ds.n(); ++i) r[i] -= fit.beta[j] * xj[i];
    }
    const double sigma = std::max(std::sqrt(norm_sq_n(r)), floor);
    const bool settled = std::fabs(sigma - out.sigma_hat) <= 1e-4 * out.sigma_hat;
    out.sigma_hat = sigma;
    out.lambda = 1.1 * out.sigma_hat * q / std::sqrt(n);
    if (settled) break;
  }
  return out;
}

double cv_lambda(const dataset& ds, const lasso_config& cfg, rng_stream stream) {
  cfg.validate();
  const std::size_t n = ds.n();
  if (n < 2) fail(errc::invalid_argument, "cross validation needs at least 2 rows");
  const long k = std::min<long>(cfg.folds, static_cast<long>(n));

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  for (std::size_t i = n - 1; i > 0; --i) {
    const std::size_t j = static_cast<std::size_t>(stream.next_uniform() * static_cast<double>(i + 1));
    std::swap(order[i], order[std::min(j, i)]);
  }
  std::vector<int> fold(n);
  for (std::size_t i = 0; i < n; ++i) fold[order[i]] = static_cast<int>(i % static_cast<std::size_t>(k));

  const double lmax = std::max(lambda_max(ds), 1e-300);
  std::vector<double> grid(cfg.grid_size);
  for (long g = 0; g < cfg.grid_size; ++g)
    grid[g] = lmax * std::pow(10.0, -3.0 * static_cast<double>(g) / static_cast<double>(cfg.grid_size - 1));

  std::vector<double> cv_sse(cfg.grid_size, 0.0);
  for (int f = 0; f < k; ++f) {
    std::size_t n_train = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (fold[i] != f) ++n_train;
    matrix xt(n_train, ds.p());
    std::vector<double> yt(n_train);
    std::size_t row = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (fold[i] == f) continue;
      for (std::size_t j = 0; j < ds.p(); ++j) xt(row, j) = ds.x(i, j);
      yt[row] = ds.y[i];
      ++row;
    }
    cd_problem pb = make_problem(xt, yt);
    std::vector<double> warm(ds.p(), 0.0);
    for (long g = 0; g < cfg.grid_size; ++g) {
      lasso_result fit = cd_solve(pb, grid[g], warm, cfg);
      for (std::size_t i = 0; i < n; ++i) {
        if (fold[i] != f) continue;
        double pred = 0.0;
        for (std::size_t j = 0; j < ds.p(); ++j)
          if (fit.beta[j] != 0.0) pred += fit.beta[j] * ds.x(i, j);
        const double e = ds.y[i] - pred;
        cv_sse[g] += e * e;
      }
    }
  }

  long best = 0;
  for (long g = 1; g < cfg.grid_size; ++g)
    if (cv_sse[g] < cv_sse[best]) best = g;
  return grid[best];
}

std::vector<double> post_lasso(const dataset& ds, std::span<const double> beta_hat) {
  if (beta_hat.size() != ds.p()) fail(errc::length_mismatch, "coefficient length != p");
  std::vector<long> support;
  for (std::size_t j = 0; j < ds.p(); ++j)
    if (beta_hat[j] != 0.0) support.push_back(static_cast<long>(j));
  if (support.size() > ds.n())
    fail(errc::invalid_argument, "refit support larger than the sample size");
  if (support.empty()) return std::vector<double>(ds.p(), 0.0);
  return post_refit(ds, support);
}

double normal_quantile(double prob) {
  if (!(prob > 0.0 && prob < 1.0)) fail(errc::domain_error, "quantile probability must lie in (0, 1)");

  // Rational approximation in three regions, then Newton polish through erfc.
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                             1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                             6.680131188771972e+01,  -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                             -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                             3.754408661907416e+00};
  const double plow = 0.02425;
  double x;
  if (prob < plow) {
    const double q = std::sqrt(-2.0 * std::log(prob));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (prob <= 1.0 - plow) {
    const double q = prob - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - prob));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  static const double inv_sqrt_2pi = 0.3989422804014327;
  for (int it = 0; it < 2; ++it) {
    const double cdf = 0.5 * std::erfc(-x / std::sqrt(2.0));
    const double pdf = inv_sqrt_2pi * std::exp(-0.5 * x * x);
    if (pdf <= 0.0) break;
    x -= (cdf - prob) / pdf;
  }
  return x;
}

} // namespace l2boost
