#pragma once

#include "dataset.hpp"
#include "stopping.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace l2boost {

enum class variant { plain, orthogonal };

struct boost_config {
  double nu = 1.0;
  long max_steps = 1000;
  variant kind = variant::plain;

  void validate() const;
};

struct boost_step {
  long m = 0;     // 0-based step index; the model after this step is model m+1
  long j = 0;     // selected column
  double gamma = 0.0; // componentwise coefficient applied at selection (nu * gamma_hat)
  double residual_sq = 0.0;
  double pred_sq = std::numeric_limits<double>::quiet_NaN(); // NaN when truth unknown
  char label = 'N'; // 'R' when j was already in the union of truth and prior selections
};

struct boost_path {
  variant kind = variant::plain;
  long n = 0;
  long p = 0;
  double nu = 1.0;
  double initial_residual_sq = 0.0;
  double initial_pred_sq = std::numeric_limits<double>::quiet_NaN();
  std::vector<boost_step> steps;
  std::vector<long> selection_order;              // distinct columns, first-selection order
  std::vector<double> final_beta;                 // model after the last recorded step
  std::vector<std::vector<double>> ortho_coef;    // orthogonal path: per-step projection coefficients
  long stop_step = 0;                             // model index chosen by the stopping rule
  std::string stop_reason;

  bool has_truth() const noexcept { return !std::isnan(initial_pred_sq); }
  long models() const noexcept { return static_cast<long>(steps.size()); }
  double residual_sq_at(long t) const;            // ||U^t||^2, t in 0..models()
  double pred_sq_at(long t) const;                // ||V^t||^2
  std::vector<double> residual_curve() const;     // model-indexed, length models()+1
  std::vector<double> pred_curve() const;
  std::vector<double> beta_at(long t) const;
  std::vector<long> support_at(long t) const;     // ascending distinct selections among first t steps
};

// One componentwise step from an explicit coefficient vector: computes the
// residual, picks the most correlated column (ties to the smallest index),
// and reports the shrunken increment.
boost_step ba_step(const dataset& ds, std::span<const double> beta, double nu);

using step_observer = std::function<void(const boost_step&, std::span<const double> beta)>;

// Componentwise least-squares boosting. Records every executed step, then
// reports the stopping rule's model choice and the termination reason.
boost_path run_ba(const dataset& ds, const boost_config& config, const stopping_rule& rule,
                  const step_observer& observer = {});

// Orthogonal variant: each step reprojects y on all selected columns, so the
// residual stays orthogonal to the selected set and no column repeats.
boost_path run_oba(const dataset& ds, const boost_config& config, const stopping_rule& rule,
                   const step_observer& observer = {});

// Least squares on the given support, zeros elsewhere.
std::vector<double> post_refit(const dataset& ds, std::span<const long> support);

struct revisit_summary {
  std::vector<char> labels;
  std::vector<long> revisit_count;  // |R(m)|, cumulative through step m
  std::vector<long> fresh_count;    // |N(m)|
  std::vector<long> q;              // q(m) = s + |N(m)| = |T^m| at entry to step m+1
  long s = 0;
};

revisit_summary revisit_analysis(const boost_path& path, std::span<const long> true_support);

// sigma^2 estimate: the residual mean square at the stopping step.
double variance_estimate(const boost_path& path);

void write_path_csv(const boost_path& path, const std::string& file);

} // namespace l2boost
