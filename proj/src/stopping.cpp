#include "stopping.hpp"

#include "errors.hpp"

#include <cmath>

namespace l2boost {

stopping_rule stopping_rule::none() { return {}; }

stopping_rule stopping_rule::fixed(long m_fixed) {
  if (m_fixed < 0) fail(errc::invalid_argument, "fixed step count must be >= 0");
  stopping_rule r;
  r.kind = stop_kind::fixed_steps;
  r.m_fixed = m_fixed;
  return r;
}

stopping_rule stopping_rule::ks(long k, long s) {
  if (k < 1 || s < 1) fail(errc::invalid_argument, "k and s must be positive");
  stopping_rule r;
  r.kind = stop_kind::k_times_s;
  r.k = k;
  r.s = s;
  return r;
}

stopping_rule stopping_rule::ratio(double cu, bool theory_mode) {
  if (!(cu > 0.0) || !std::isfinite(cu)) fail(errc::invalid_threshold, "ratio constant must be finite and positive");
  if (theory_mode && !(cu > 4.0)) fail(errc::invalid_threshold, "theory mode needs a ratio constant > 4");
  stopping_rule r;
  r.kind = stop_kind::variance_ratio;
  r.cu = cu;
  r.theory_mode = theory_mode;
  return r;
}

stopping_rule stopping_rule::oracle() {
  stopping_rule r;
  r.kind = stop_kind::oracle;
  return r;
}

stopping_rule stopping_rule::vbound(double eta, double lambda_n, long s, double c, bool theory_mode) {
  if (!(lambda_n > 0.0) || !(eta > 0.0)) fail(errc::invalid_threshold, "v-bound needs positive eta and lambda");
  if (!(c >= 0.0) || !(c < 1.0)) fail(errc::domain_error, "c must lie in [0, 1)");
  if (s < 0) fail(errc::invalid_argument, "support size must be >= 0");
  if (theory_mode && !(eta >= 3.0 / std::sqrt(1.0 - c)))
    fail(errc::invalid_threshold, "theory mode needs eta >= 3 / sqrt(1 - c)");
  stopping_rule r;
  r.kind = stop_kind::v_bound;
  r.eta = eta;
  r.lambda_n = lambda_n;
  r.s = s;
  r.c = c;
  r.theory_mode = theory_mode;
  return r;
}

std::optional<long> stopping_rule::step_cap() const {
  switch (kind) {
    case stop_kind::fixed_steps: return m_fixed;
    case stop_kind::k_times_s: return k * s;
    default: return std::nullopt;
  }
}

double ratio_threshold(const stopping_rule& rule, std::size_t n, std::size_t p) {
  if (n == 0 || p == 0) fail(errc::invalid_argument, "ratio threshold needs n, p >= 1");
  const double t = 1.0 - rule.cu * std::log(static_cast<double>(p)) / static_cast<double>(n);
  if (!(t > 0.0) || !(t < 1.0)) fail(errc::invalid_threshold, "ratio threshold falls outside (0, 1)");
  return t;
}

long ratio_stop_step(std::span<const double> residual_sq_by_model, double threshold) {
  const long models = static_cast<long>(residual_sq_by_model.size());
  for (long t = 1; t < models; ++t) {
    const double prev = residual_sq_by_model[t - 1];
    if (prev <= 0.0) return t - 1;
    if (residual_sq_by_model[t] / prev > threshold) return t - 1;
  }
  return models - 1;
}

long argmin_step(std::span<const double> values_by_model) {
  if (values_by_model.empty()) fail(errc::oracle_unavailable, "no recorded values to minimize");
  long best = 0;
  for (long t = 1; t < static_cast<long>(values_by_model.size()); ++t)
    if (values_by_model[t] < values_by_model[best]) best = t;
  return best;
}

} // namespace l2boost
