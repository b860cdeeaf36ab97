#include "boosting.hpp"

#include "csv.hpp"
#include "errors.hpp"

#include <algorithm>
#include <cmath>

namespace l2boost {

namespace {

constexpr double kZeroResidualSq = 1e-14;

struct pick {
  long j = -1;
  double corr = 0.0;   // <U, x_j>_n
  double gamma_hat = 0.0; // corr / E_n[x_j^2]
};

// columns' E_n second moments; standardized data makes these ~1 but the
// selection divides by the exact value
std::vector<double> column_msq(const dataset& ds) {
  std::vector<double> msq(ds.p());
  for (std::size_t j = 0; j < ds.p(); ++j) msq[j] = norm_sq_n(ds.x.col(j));
  return msq;
}

// argmax over columns of squared correlation with u; ties take the smallest
// index because the scan keeps only strict improvements
pick select_column(const dataset& ds, std::span<const double> u, const std::vector<double>& msq,
                   const std::vector<char>* excluded) {
  pick best;
  double best_score = -1.0;
  for (std::size_t j = 0; j < ds.p(); ++j) {
    if (excluded && (*excluded)[j]) continue;
    const double c = inner_n(u, ds.x.col(j));
    const double score = c * c / msq[j];
    if (score > best_score) {
      best_score = score;
      best.j = static_cast<long>(j);
      best.corr = c;
      best.gamma_hat = c / msq[j];
    }
  }
  return best;
}

std::vector<double> truth_fit(const dataset& ds) {
  std::vector<double> v(ds.n(), 0.0);
  for (std::size_t j = 0; j < ds.p(); ++j) {
    const double b = ds.true_beta[j];
    if (b == 0.0) continue;
    const auto col = ds.x.col(j);
    for (std::size_t i = 0; i < ds.n(); ++i) v[i] += b * col[i];
  }
  return v;
}

std::vector<char> truth_mask(const dataset& ds) {
  std::vector<char> mask(ds.p(), 0);
  if (ds.has_truth())
    for (std::size_t j = 0; j < ds.p(); ++j)
      if (ds.true_beta[j] != 0.0) mask[j] = 1;
  return mask;
}

} // namespace

void boost_config::validate() const {
  if (!(nu > 0.0) || nu > 1.0) fail(errc::invalid_argument, "step size nu must lie in (0, 1]");
  if (max_steps < 1) fail(errc::invalid_argument, "max_steps must be >= 1");
}

double boost_path::residual_sq_at(long t) const {
  if (t < 0 || t > models()) fail(errc::invalid_argument, "model index out of range");
  return t == 0 ? initial_residual_sq : steps[t - 1].residual_sq;
}

double boost_path::pred_sq_at(long t) const {
  if (t < 0 || t > models()) fail(errc::invalid_argument, "model index out of range");
  return t == 0 ? initial_pred_sq : steps[t - 1].pred_sq;
}

std::vector<double> boost_path::residual_curve() const {
  std::vector<double> out(models() + 1);
  for (long t = 0; t <= models(); ++t) out[t] = residual_sq_at(t);
  return out;
}

std::vector<double> boost_path::pred_curve() const {
  std::vector<double> out(models() + 1);
  for (long t = 0; t <= models(); ++t) out[t] = pred_sq_at(t);
  return out;
}

std::vector<double> boost_path::beta_at(long t) const {
  if (t < 0 || t > models()) fail(errc::invalid_argument, "model index out of range");
  std::vector<double> beta(p, 0.0);
  if (kind == variant::plain) {
    for (long i = 0; i < t; ++i) beta[steps[i].j] += steps[i].gamma;
  } else if (t > 0) {
    const auto& coef = ortho_coef[t - 1];
    for (std::size_t k = 0; k < coef.size(); ++k) beta[selection_order[k]] = coef[k];
  }
  return beta;
}

std::vector<long> boost_path::support_at(long t) const {
  if (t < 0 || t > models()) fail(errc::invalid_argument, "model index out of range");
  std::vector<char> seen(p, 0);
  std::vector<long> out;
  for (long i = 0; i < t; ++i) {
    const long j = steps[i].j;
    if (!seen[j]) {
      seen[j] = 1;
      out.push_back(j);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

boost_step ba_step(const dataset& ds, std::span<const double> beta, double nu) {
  if (!(nu > 0.0) || nu > 1.0) fail(errc::invalid_argument, "step size nu must lie in (0, 1]");
  if (beta.size() != ds.p()) fail(errc::length_mismatch, "coefficient length differs from predictor count");

  std::vector<double> u(ds.y.begin(), ds.y.end());
  for (std::size_t j = 0; j < ds.p(); ++j) {
    const double b = beta[j];
    if (b == 0.0) continue;
    const auto col = ds.x.col(j);
    for (std::size_t i = 0; i < ds.n(); ++i) u[i] -= b * col[i];
  }
  if (norm_sq_n(u) < kZeroResidualSq) fail(errc::zero_residual, "residual is numerically zero");

  const auto msq = column_msq(ds);
  const pick sel = select_column(ds, u, msq, nullptr);

  boost_step step;
  step.m = 0;
  step.j = sel.j;
  step.gamma = nu * sel.gamma_hat;
  const auto col = ds.x.col(sel.j);
  for (std::size_t i = 0; i < ds.n(); ++i) u[i] -= step.gamma * col[i];
  step.residual_sq = norm_sq_n(u);

  if (ds.has_truth()) {
    auto v = truth_fit(ds);
    for (std::size_t j = 0; j < ds.p(); ++j) {
      const double b = beta[j] + (static_cast<long>(j) == sel.j ? step.gamma : 0.0);
      if (b == 0.0) continue;
      const auto cj = ds.x.col(j);
      for (std::size_t i = 0; i < ds.n(); ++i) v[i] -= b * cj[i];
    }
    step.pred_sq = norm_sq_n(v);
  }

  // label relative to truth plus the nonzero coordinates of the given beta
  auto mask = truth_mask(ds);
  for (std::size_t j = 0; j < ds.p(); ++j)
    if (beta[j] != 0.0) mask[j] = 1;
  step.label = mask[sel.j] ? 'R' : 'N';
  return step;
}

namespace {

boost_path run_common(const dataset& ds, const boost_config& config, const stopping_rule& rule,
                      const step_observer& observer) {
  config.validate();
  const bool ortho = config.kind == variant::orthogonal;
  const std::size_t n = ds.n();
  const std::size_t p = ds.p();

  boost_path path;
  path.kind = config.kind;
  path.n = static_cast<long>(n);
  path.p = static_cast<long>(p);
  path.nu = config.nu;

  double threshold = 0.0;
  if (rule.kind == stop_kind::variance_ratio) threshold = ratio_threshold(rule, n, p);
  if ((rule.kind == stop_kind::v_bound || rule.kind == stop_kind::oracle) && !ds.has_truth())
    fail(errc::oracle_unavailable, "rule needs true coefficients on the dataset");

  // 2n guards data-driven rules against runaway paths; a rule that asks for a
  // deterministic step count gets exactly that count (max_steps still binds)
  long cap = std::min<long>(config.max_steps, 2 * static_cast<long>(n));
  if (auto rc = rule.step_cap()) cap = std::min<long>(config.max_steps, *rc);
  if (ortho) cap = std::min<long>(cap, static_cast<long>(p));

  const auto msq = column_msq(ds);
  std::vector<double> u(ds.y.begin(), ds.y.end());
  std::vector<double> beta(p, 0.0);
  std::vector<double> v;
  std::vector<double> xb_true; // fixed X * true_beta, for the orthogonal path
  if (ds.has_truth()) {
    v = truth_fit(ds);
    if (ortho) xb_true = v;
  }

  path.initial_residual_sq = norm_sq_n(u);
  if (ds.has_truth()) path.initial_pred_sq = norm_sq_n(v);

  std::vector<char> selected(p, 0);
  const auto truth = truth_mask(ds);
  growing_cholesky chol(n);

  double resid_sq = path.initial_residual_sq;
  double prev_resid_sq = resid_sq;
  bool decided = false;

  auto vbound_hit = [&](long t, double pred_sq) {
    return std::sqrt(pred_sq) <= rule.eta * std::sqrt(static_cast<double>(t + rule.s)) * rule.lambda_n;
  };
  if (rule.kind == stop_kind::v_bound && vbound_hit(0, path.initial_pred_sq)) {
    path.stop_step = 0;
    path.stop_reason = "v-bound";
    decided = true;
    cap = 0;
  }

  for (long m = 0; m < cap; ++m) {
    if (resid_sq < kZeroResidualSq) {
      path.stop_step = m;
      path.stop_reason = "zero-residual";
      decided = true;
      break;
    }

    const pick sel = select_column(ds, u, msq, ortho ? &selected : nullptr);
    if (sel.j < 0 || sel.corr * sel.corr <= (ortho ? 1e-24 * msq[sel.j] * resid_sq : 0.0)) {
      path.stop_step = m;
      path.stop_reason = "uncorrelated";
      decided = true;
      break;
    }

    boost_step step;
    step.m = m;
    step.j = sel.j;
    step.label = (selected[sel.j] || truth[sel.j]) ? 'R' : 'N';

    if (!ortho) {
      step.gamma = config.nu * sel.gamma_hat;
      beta[sel.j] += step.gamma;
      const auto col = ds.x.col(sel.j);
      for (std::size_t i = 0; i < n; ++i) u[i] -= step.gamma * col[i];
      if (!v.empty())
        for (std::size_t i = 0; i < n; ++i) v[i] -= step.gamma * col[i];
    } else {
      step.gamma = sel.gamma_hat;
      if (!chol.try_add(ds.x.col(sel.j))) {
        path.stop_step = m;
        path.stop_reason = "collinear";
        decided = true;
        break;
      }
      path.selection_order.push_back(sel.j);
      selected[sel.j] = 1;
      auto coef = chol.solve(ds.y);
      std::fill(beta.begin(), beta.end(), 0.0);
      std::vector<double> fitted(n, 0.0);
      for (std::size_t k = 0; k < coef.size(); ++k) {
        beta[path.selection_order[k]] = coef[k];
        const auto col = ds.x.col(path.selection_order[k]);
        for (std::size_t i = 0; i < n; ++i) fitted[i] += coef[k] * col[i];
      }
      for (std::size_t i = 0; i < n; ++i) u[i] = ds.y[i] - fitted[i];
      if (!v.empty())
        for (std::size_t i = 0; i < n; ++i) v[i] = xb_true[i] - fitted[i];
      path.ortho_coef.push_back(std::move(coef));
    }

    if (!ortho && !selected[sel.j]) {
      selected[sel.j] = 1;
      path.selection_order.push_back(sel.j);
    }

    resid_sq = norm_sq_n(u);
    step.residual_sq = resid_sq;
    if (!v.empty()) step.pred_sq = norm_sq_n(v);
    path.steps.push_back(step);
    if (observer) observer(step, beta);

    const long t = m + 1; // model index after this step
    if (rule.kind == stop_kind::variance_ratio && prev_resid_sq > 0.0 && resid_sq / prev_resid_sq > threshold) {
      path.stop_step = t - 1;
      path.stop_reason = "variance-ratio";
      decided = true;
      break;
    }
    if (rule.kind == stop_kind::v_bound && vbound_hit(t, step.pred_sq)) {
      path.stop_step = t;
      path.stop_reason = "v-bound";
      decided = true;
      break;
    }
    prev_resid_sq = resid_sq;
  }

  path.final_beta = std::move(beta);

  if (!decided) {
    switch (rule.kind) {
      case stop_kind::fixed_steps:
        path.stop_step = path.models();
        path.stop_reason = "fixed-steps";
        break;
      case stop_kind::k_times_s:
        path.stop_step = path.models();
        path.stop_reason = "k-times-s";
        break;
      case stop_kind::oracle:
        path.stop_step = argmin_step(path.pred_curve());
        path.stop_reason = "oracle";
        break;
      case stop_kind::variance_ratio:
      case stop_kind::v_bound:
        path.stop_step = path.models();
        path.stop_reason = "cap-no-violation";
        break;
      default:
        path.stop_step = path.models();
        path.stop_reason = "cap";
    }
  } else if (rule.kind == stop_kind::oracle) {
    // early termination still minimizes over everything recorded
    path.stop_step = argmin_step(path.pred_curve());
    path.stop_reason = "oracle";
  }

  return path;
}

} // namespace

boost_path run_ba(const dataset& ds, const boost_config& config, const stopping_rule& rule,
                  const step_observer& observer) {
  boost_config cfg = config;
  cfg.kind = variant::plain;
  return run_common(ds, cfg, rule, observer);
}

boost_path run_oba(const dataset& ds, const boost_config& config, const stopping_rule& rule,
                   const step_observer& observer) {
  boost_config cfg = config;
  cfg.kind = variant::orthogonal;
  return run_common(ds, cfg, rule, observer);
}

std::vector<double> post_refit(const dataset& ds, std::span<const long> support) {
  std::vector<double> beta(ds.p(), 0.0);
  if (support.empty()) return beta;
  growing_cholesky chol(ds.n());
  for (long j : support) {
    if (j < 0 || j >= static_cast<long>(ds.p())) fail(errc::invalid_argument, "support index out of range");
    if (!chol.try_add(ds.x.col(j))) fail(errc::singular_gram, "support columns are numerically collinear");
  }
  const auto coef = chol.solve(ds.y);
  for (std::size_t k = 0; k < support.size(); ++k) beta[support[k]] = coef[k];
  return beta;
}

revisit_summary revisit_analysis(const boost_path& path, std::span<const long> true_support) {
  revisit_summary out;
  std::vector<char> mask(path.p, 0);
  for (long j : true_support) {
    if (j < 0 || j >= path.p) fail(errc::invalid_argument, "support index out of range");
    mask[j] = 1;
  }
  out.s = static_cast<long>(true_support.size());

  long r = 0;
  long f = 0;
  for (const auto& step : path.steps) {
    const bool revisit = mask[step.j] != 0;
    out.labels.push_back(revisit ? 'R' : 'N');
    if (revisit)
      ++r;
    else {
      ++f;
      mask[step.j] = 1;
    }
    out.revisit_count.push_back(r);
    out.fresh_count.push_back(f);
    out.q.push_back(out.s + f);
  }
  return out;
}

double variance_estimate(const boost_path& path) { return path.residual_sq_at(path.stop_step); }

void write_path_csv(const boost_path& path, const std::string& file) {
  csv_writer w(file);
  w.row({"m", "j", "gamma", "residual_sq", "pred_sq", "label"});
  for (const auto& s : path.steps) {
    w.row({std::to_string(s.m), std::to_string(s.j), format_g12(s.gamma), format_g12(s.residual_sq),
           std::isnan(s.pred_sq) ? "" : format_g12(s.pred_sq), std::string(1, s.label)});
  }
}

} // namespace l2boost
