#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>

namespace l2boost {

enum class stop_kind {
  none,           // run to the step cap
  fixed_steps,    // exactly m_fixed steps (fewer if the path terminates early)
  k_times_s,      // k * s steps; the orthogonal path counts distinct selections
  variance_ratio, // first model whose residual ratio exceeds the threshold
  oracle,         // argmin of the recorded prediction-error curve
  v_bound,        // first model with ||V^m|| <= eta * sqrt(m + s) * lambda_n
};

struct stopping_rule {
  stop_kind kind = stop_kind::none;
  long m_fixed = 0;
  long k = 2;
  long s = 0;
  double cu = 4.5;
  double eta = 0.0;
  double lambda_n = 0.0;
  double c = 0.0;
  bool theory_mode = false;

  static stopping_rule none();
  static stopping_rule fixed(long m_fixed);
  static stopping_rule ks(long k, long s);
  static stopping_rule ratio(double cu, bool theory_mode = false);
  static stopping_rule oracle();
  static stopping_rule vbound(double eta, double lambda_n, long s, double c, bool theory_mode = false);

  // steps the rule itself caps the run at, when it has a deterministic count
  std::optional<long> step_cap() const;
};

// 1 - cu * log(p) / n; must land in (0, 1).
double ratio_threshold(const stopping_rule& rule, std::size_t n, std::size_t p);

// First model t >= 1 with residual_sq[t] / residual_sq[t-1] > threshold
// returns t - 1; the sequence passed starts at the model-0 value.
long ratio_stop_step(std::span<const double> residual_sq_by_model, double threshold);

// Index of the smallest value; values_by_model[0] is the null model.
long argmin_step(std::span<const double> values_by_model);

} // namespace l2boost
