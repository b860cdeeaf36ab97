#include "simlab.hpp"

#include "csv.hpp"
#include "errors.hpp"
#include "rng.hpp"
#include "stopping.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

namespace l2boost {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

std::string to_string(beta_design d) {
  switch (d) {
    case beta_design::sparse: return "sparse";
    case beta_design::polynomial: return "polynomial";
    case beta_design::illustrative: return "illustrative";
  }
  return "?";
}

std::string to_string(x_design d) {
  return d == x_design::iid ? "iid" : "toeplitz";
}

beta_design beta_design_from(const std::string& token) {
  if (token == "sparse") return beta_design::sparse;
  if (token == "polynomial") return beta_design::polynomial;
  if (token == "illustrative") return beta_design::illustrative;
  fail(errc::invalid_argument, "unknown beta design '" + token + "'");
}

x_design x_design_from(const std::string& token) {
  if (token == "iid") return x_design::iid;
  if (token == "toeplitz") return x_design::toeplitz;
  fail(errc::invalid_argument, "unknown x design '" + token + "'");
}

void dgp_spec::validate() const {
  if (n < 2) fail(errc::invalid_argument, "dgp needs n >= 2");
  if (p < 1) fail(errc::invalid_argument, "dgp needs p >= 1");
  if (s > p) fail(errc::invalid_argument, "dgp needs s <= p");
  if (holdout < 1) fail(errc::invalid_argument, "dgp needs holdout >= 1");
  if (!(noise_sd >= 0.0) || !std::isfinite(noise_sd))
    fail(errc::invalid_argument, "noise_sd must be finite and >= 0");
  if (betas == beta_design::illustrative && p < 3)
    fail(errc::invalid_argument, "illustrative design needs p >= 3");
}

std::vector<double> dgp_spec::coefficients() const {
  std::vector<double> beta(p, 0.0);
  switch (betas) {
    case beta_design::sparse:
      for (std::size_t j = 0; j < s; ++j) beta[j] = 1.0;
      break;
    case beta_design::polynomial:
      for (std::size_t j = 0; j < p; ++j) beta[j] = 1.0 / static_cast<double>(j + 1);
      break;
    case beta_design::illustrative:
      beta[0] = 5.0;
      beta[1] = 2.0;
      beta[2] = 1.0;
      break;
  }
  return beta;
}

matrix design_chol(const dgp_spec& dgp) {
  if (dgp.xs == x_design::iid) return matrix(); // empty factor means identity
  matrix sigma(dgp.p, dgp.p);
  for (std::size_t j = 0; j < dgp.p; ++j)
    for (std::size_t k = 0; k < dgp.p; ++k) {
      const std::size_t d = j > k ? j - k : k - j;
      sigma(j, k) = std::pow(-0.5, static_cast<double>(d));
    }
  return cholesky(sigma);
}

namespace {

// Rows are drawn one at a time (row-major draw order), then the noise vector;
// this fixes the stream layout independently of the storage order.
void fill_design(matrix& x, std::vector<double>& y, std::span<const double> beta, double sd,
                 const matrix& chol, rng_stream& stream) {
  const std::size_t rows = x.rows();
  const std::size_t p = x.cols();
  std::vector<double> z(p);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < p; ++j) z[j] = stream.next_gaussian();
    if (chol.rows() == 0) {
      for (std::size_t j = 0; j < p; ++j) x(i, j) = z[j];
    } else {
      for (std::size_t j = 0; j < p; ++j) {
        double v = 0.0;
        for (std::size_t k = 0; k <= j; ++k) v += chol(j, k) * z[k];
        x(i, j) = v;
      }
    }
  }
  y.assign(rows, 0.0);
  for (std::size_t i = 0; i < rows; ++i) {
    double f = 0.0;
    for (std::size_t j = 0; j < p; ++j)
      if (beta[j] != 0.0) f += beta[j] * x(i, j);
    y[i] = f;
  }
  for (std::size_t i = 0; i < rows; ++i) y[i] += sd * stream.next_gaussian();
}

} // namespace

sample generate_with(const dgp_spec& dgp, const matrix& chol, std::uint64_t master_seed,
                     std::uint64_t rep) {
  dgp.validate();
  const std::vector<double> beta = dgp.coefficients();

  rng_stream train_stream(master_seed, 2 * rep);
  matrix xt(dgp.n, dgp.p);
  std::vector<double> yt;
  fill_design(xt, yt, beta, dgp.noise_sd, chol, train_stream);

  rng_stream hold_stream(master_seed, 2 * rep + 1);
  matrix xh(dgp.holdout, dgp.p);
  std::vector<double> yh;
  fill_design(xh, yh, beta, dgp.noise_sd, chol, hold_stream);

  sample out;
  out.train = standardize(xt, std::move(yt), true);
  out.holdout = standardize_with(xh, std::move(yh), out.train.means, out.train.scales,
                                 out.train.y_center);
  out.train.true_beta.resize(dgp.p);
  for (std::size_t j = 0; j < dgp.p; ++j)
    out.train.true_beta[j] = beta[j] * out.train.scales[j];
  out.holdout.true_beta = out.train.true_beta;
  return out;
}

sample generate(const dgp_spec& dgp, std::uint64_t master_seed, std::uint64_t rep) {
  return generate_with(dgp, design_chol(dgp), master_seed, rep);
}

double mse_out(const dataset& holdout, std::span<const double> beta_hat) {
  if (!holdout.has_truth()) fail(errc::invalid_argument, "holdout carries no true coefficients");
  if (beta_hat.size() != holdout.p()) fail(errc::length_mismatch, "coefficient length != p");
  std::vector<double> d(holdout.n(), 0.0);
  for (std::size_t j = 0; j < holdout.p(); ++j) {
    const double w = holdout.true_beta[j] - beta_hat[j];
    if (w == 0.0) continue;
    auto xj = holdout.x.col(j);
    for (std::size_t i = 0; i < d.size(); ++i) d[i] += w * xj[i];
  }
  return norm_sq_n(d);
}

bool method_spec::is_lasso() const {
  return estimator == estimator_kind::lasso || estimator == estimator_kind::post_lasso;
}

std::string method_spec::name() const {
  std::string est;
  switch (estimator) {
    case estimator_kind::ba: est = "ba"; break;
    case estimator_kind::post_ba: est = "post-ba"; break;
    case estimator_kind::oba: est = "oba"; break;
    case estimator_kind::lasso: est = "lasso"; break;
    case estimator_kind::post_lasso: est = "post-lasso"; break;
  }
  if (is_lasso()) return est + (penalty == penalty_kind::plugin ? "-plugin" : "-cv");
  switch (rule) {
    case rule_kind::oracle: return est + "-oracle";
    case rule_kind::ks: return est + "-ks" + std::to_string(k);
    case rule_kind::ratio: return est + "-ratio";
    case rule_kind::fixed: return est + "-fixed" + std::to_string(m_fixed);
  }
  return est;
}

void method_spec::validate() const {
  if (k < 1) fail(errc::invalid_argument, "method k must be >= 1");
  if (m_fixed < 0) fail(errc::invalid_argument, "method fixed step count must be >= 0");
  if (!(cu > 0.0) || !std::isfinite(cu)) fail(errc::invalid_argument, "method cu must be positive");
  if (!(alpha > 0.0 && alpha < 1.0)) fail(errc::invalid_argument, "method alpha must lie in (0, 1)");
}

void experiment_spec::validate() const {
  dgp.validate();
  if (methods.empty()) fail(errc::invalid_argument, "experiment needs at least one method");
  for (const auto& m : methods) m.validate();
  if (repetitions < 1) fail(errc::invalid_argument, "experiment needs repetitions >= 1");
  if (max_steps < 0) fail(errc::invalid_argument, "max_steps must be >= 0");
  if (!(nu > 0.0 && nu <= 1.0)) fail(errc::invalid_argument, "nu must lie in (0, 1]");
  lasso.validate();
}

void curve_spec::validate() const {
  dgp.validate();
  if (repetitions < 1) fail(errc::invalid_argument, "curve needs repetitions >= 1");
  if (max_steps < 0) fail(errc::invalid_argument, "max_steps must be >= 0");
  if (!(nu > 0.0 && nu <= 1.0)) fail(errc::invalid_argument, "nu must lie in (0, 1]");
  if (!(cu > 0.0) || !std::isfinite(cu)) fail(errc::invalid_argument, "cu must be positive");
  lasso.validate();
}

namespace {

struct boosting_curves {
  std::vector<double> resid;     // ||U^t||^2 by model
  std::vector<double> out;       // holdout MSE by model
  std::vector<double> refit_out; // holdout MSE of the support refit; NaN once singular
  std::vector<long> support;     // distinct selections by model
};

// One pass over a boosting path serves every stopping rule: the observer
// maintains the holdout prediction-error and (plain variant) the incremental
// support refit, so no model is ever rebuilt afterwards.
boosting_curves build_curves(const dataset& train, const dataset& holdout, variant kind, double nu,
                             long max_steps, bool want_refit) {
  const std::size_t n1 = holdout.n();
  std::vector<double> base(n1, 0.0); // holdout prediction of the true model
  for (std::size_t j = 0; j < holdout.p(); ++j) {
    const double b = holdout.true_beta[j];
    if (b == 0.0) continue;
    auto xj = holdout.x.col(j);
    for (std::size_t i = 0; i < n1; ++i) base[i] += b * xj[i];
  }

  boosting_curves cv;
  cv.out.push_back(norm_sq_n(base));
  cv.support.push_back(0);
  if (want_refit) cv.refit_out.push_back(cv.out[0]);

  std::vector<double> diff = base; // base - holdout prediction of the current model
  std::vector<char> seen(train.p(), 0);
  long distinct = 0;
  std::vector<long> order;
  growing_cholesky chol(train.n());
  bool refit_broken = false;

  step_observer observer = [&](const boost_step& st, std::span<const double> beta) {
    bool fresh = false;
    if (!seen[st.j]) {
      seen[st.j] = 1;
      ++distinct;
      fresh = true;
      order.push_back(st.j);
    }
    cv.support.push_back(distinct);

    if (kind == variant::plain) {
      auto xj = holdout.x.col(st.j);
      for (std::size_t i = 0; i < n1; ++i) diff[i] -= st.gamma * xj[i];
      cv.out.push_back(norm_sq_n(diff));
    } else {
      std::vector<double> d = base;
      for (long jj : order) {
        const double b = beta[jj];
        if (b == 0.0) continue;
        auto xj = holdout.x.col(jj);
        for (std::size_t i = 0; i < n1; ++i) d[i] -= b * xj[i];
      }
      cv.out.push_back(norm_sq_n(d));
    }

    if (!want_refit) return;
    if (refit_broken) {
      cv.refit_out.push_back(kNaN);
      return;
    }
    if (!fresh) {
      cv.refit_out.push_back(cv.refit_out.back());
      return;
    }
    if (!chol.try_add(train.x.col(st.j))) {
      refit_broken = true;
      cv.refit_out.push_back(kNaN);
      return;
    }
    const std::vector<double> coef = chol.solve(train.y);
    std::vector<double> d = base;
    for (std::size_t k2 = 0; k2 < coef.size(); ++k2) {
      auto xj = holdout.x.col(order[k2]);
      for (std::size_t i = 0; i < n1; ++i) d[i] -= coef[k2] * xj[i];
    }
    cv.refit_out.push_back(norm_sq_n(d));
  };

  boost_config cfg;
  cfg.nu = nu;
  cfg.max_steps = max_steps;
  cfg.kind = kind;
  boost_path path = kind == variant::plain ? run_ba(train, cfg, stopping_rule::none(), observer)
                                           : run_oba(train, cfg, stopping_rule::none(), observer);
  cv.resid = path.residual_curve();
  return cv;
}

long argmin_skip_nan(std::span<const double> v) {
  long best = -1;
  for (std::size_t t = 0; t < v.size(); ++t) {
    if (std::isnan(v[t])) continue;
    if (best < 0 || v[t] < v[best]) best = static_cast<long>(t);
  }
  if (best < 0) fail(errc::oracle_unavailable, "no finite value along the path");
  return best;
}

struct method_eval {
  double mse = kNaN;
  double stop = kNaN;
  double support = kNaN;
  bool ok = false;
};

method_eval eval_boosting(const boosting_curves& cvs, const method_spec& ms, const dgp_spec& dgp) {
  const long models = static_cast<long>(cvs.resid.size()) - 1;
  const bool refit = ms.estimator == estimator_kind::post_ba;
  const std::vector<double>& target = refit ? cvs.refit_out : cvs.out;

  long t = 0;
  switch (ms.rule) {
    case rule_kind::oracle: t = argmin_skip_nan(target); break;
    case rule_kind::ks: t = std::min(ms.k * static_cast<long>(dgp.s), models); break;
    case rule_kind::ratio: {
      stopping_rule rl = stopping_rule::ratio(ms.cu);
      t = ratio_stop_step(cvs.resid, ratio_threshold(rl, dgp.n, dgp.p));
      break;
    }
    case rule_kind::fixed: t = std::min(ms.m_fixed, models); break;
  }

  method_eval ev;
  ev.mse = target[t];
  if (std::isnan(ev.mse)) return ev; // refit singular at the stopped model
  ev.stop = static_cast<double>(t);
  ev.support = static_cast<double>(cvs.support[t]);
  ev.ok = true;
  return ev;
}

method_eval eval_from_beta(const dataset& train, const dataset& holdout,
                           std::span<const double> beta, bool refit) {
  method_eval ev;
  std::vector<double> coefs(beta.begin(), beta.end());
  if (refit) coefs = post_lasso(train, beta);
  ev.mse = mse_out(holdout, coefs);
  long nnz = 0;
  for (double b : beta)
    if (b != 0.0) ++nnz;
  ev.stop = static_cast<double>(nnz); // selection size plays the step role here
  ev.support = static_cast<double>(nnz);
  ev.ok = true;
  return ev;
}

struct rep_result {
  std::vector<method_eval> by_method;
};

rep_result compute_rep(const experiment_spec& spec, const matrix& chol, std::uint64_t rep) {
  rep_result out;
  out.by_method.resize(spec.methods.size());

  sample smp;
  try {
    smp = generate_with(spec.dgp, chol, spec.master_seed, rep);
  } catch (const error&) {
    return out; // every method fails this repetition
  }

  bool need_plain = false, need_refit = false, need_ortho = false;
  for (const auto& m : spec.methods) {
    need_plain |= m.estimator == estimator_kind::ba || m.estimator == estimator_kind::post_ba;
    need_refit |= m.estimator == estimator_kind::post_ba;
    need_ortho |= m.estimator == estimator_kind::oba;
  }

  boosting_curves plain_cv, ortho_cv;
  bool plain_ok = false, ortho_ok = false;
  try {
    if (need_plain) {
      plain_cv = build_curves(smp.train, smp.holdout, variant::plain, spec.nu, spec.max_steps,
                              need_refit);
      plain_ok = true;
    }
  } catch (const error&) {
  }
  try {
    if (need_ortho) {
      ortho_cv = build_curves(smp.train, smp.holdout, variant::orthogonal, spec.nu, spec.max_steps,
                              false);
      ortho_ok = true;
    }
  } catch (const error&) {
  }

  // Lasso fits shared between methods with the same penalty settings.
  struct cached_fit {
    penalty_kind pen;
    double alpha;
    std::vector<double> beta;
  };
  std::vector<cached_fit> fits;
  auto lasso_beta = [&](const method_spec& ms) -> const std::vector<double>& {
    for (const auto& f : fits)
      if (f.pen == ms.penalty && f.alpha == ms.alpha) return f.beta;
    cached_fit f;
    f.pen = ms.penalty;
    f.alpha = ms.alpha;
    if (ms.penalty == penalty_kind::plugin) {
      const double sigma0 = std::sqrt(norm_sq_n(smp.train.y));
      if (!(sigma0 > 0.0)) fail(errc::invalid_argument, "degenerate response");
      lasso_config cfg = spec.lasso;
      cfg.alpha = ms.alpha;
      const plugin_penalty pen = plugin_lambda(smp.train, ms.alpha, sigma0, cfg);
      f.beta = lasso_fit(smp.train, pen.lambda, cfg).beta;
    } else {
      const double lam =
          cv_lambda(smp.train, spec.lasso, rng_stream(spec.master_seed, 0x8000000000000000ull + rep));
      f.beta = lasso_fit(smp.train, lam, spec.lasso).beta;
    }
    fits.push_back(std::move(f));
    return fits.back().beta;
  };

  for (std::size_t mi = 0; mi < spec.methods.size(); ++mi) {
    const method_spec& ms = spec.methods[mi];
    try {
      switch (ms.estimator) {
        case estimator_kind::ba:
        case estimator_kind::post_ba:
          if (plain_ok) out.by_method[mi] = eval_boosting(plain_cv, ms, spec.dgp);
          break;
        case estimator_kind::oba:
          if (ortho_ok) out.by_method[mi] = eval_boosting(ortho_cv, ms, spec.dgp);
          break;
        case estimator_kind::lasso:
          out.by_method[mi] = eval_from_beta(smp.train, smp.holdout, lasso_beta(ms), false);
          break;
        case estimator_kind::post_lasso:
          out.by_method[mi] = eval_from_beta(smp.train, smp.holdout, lasso_beta(ms), true);
          break;
      }
    } catch (const error&) {
      out.by_method[mi] = method_eval{};
    }
  }
  return out;
}

// Ordered reduction over repetition slots; identical for any worker count.
result_row reduce_method(const experiment_spec& spec, std::size_t mi,
                         const std::vector<rep_result>& slots) {
  result_row row;
  row.dgp = spec.dgp;
  row.method = spec.methods[mi].name();
  row.repetitions = spec.repetitions;

  double sum = 0.0, sum_stop = 0.0, sum_support = 0.0;
  long count = 0;
  for (const auto& slot : slots) {
    const method_eval& ev = slot.by_method[mi];
    if (!ev.ok) continue;
    sum += ev.mse;
    sum_stop += ev.stop;
    sum_support += ev.support;
    ++count;
  }
  row.failures = spec.repetitions - count;
  if (count == 0) return row;

  const double mean = sum / static_cast<double>(count);
  double ss = 0.0;
  for (const auto& slot : slots) {
    const method_eval& ev = slot.by_method[mi];
    if (!ev.ok) continue;
    ss += (ev.mse - mean) * (ev.mse - mean);
  }
  row.mse_mean = mean;
  row.mse_se = count > 1 ? std::sqrt(ss / static_cast<double>(count - 1)) /
                               std::sqrt(static_cast<double>(count))
                         : 0.0;
  row.mean_stop_step = sum_stop / static_cast<double>(count);
  row.mean_support = sum_support / static_cast<double>(count);
  return row;
}

// Runs fn(r) for r in [0, reps) across the requested worker count; slot
// writes are disjoint so the result is independent of scheduling.
template <typename Fn>
void parallel_reps(long reps, int workers, Fn&& fn) {
  const int w = std::max(1, std::min<int>(workers, static_cast<int>(reps)));
  if (w == 1) {
    for (long r = 0; r < reps; ++r) fn(r);
    return;
  }
  std::atomic<long> next{0};
  std::exception_ptr first_error;
  std::mutex error_mu;
  std::vector<std::thread> pool;
  pool.reserve(w);
  for (int t = 0; t < w; ++t)
    pool.emplace_back([&] {
      for (;;) {
        const long r = next.fetch_add(1);
        if (r >= reps) return;
        try {
          fn(r);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    });
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

} // namespace

result_table run_experiment(const experiment_spec& spec, int workers) {
  spec.validate();
  const matrix chol = design_chol(spec.dgp);

  std::vector<rep_result> slots(spec.repetitions);
  parallel_reps(spec.repetitions, workers,
                [&](long r) { slots[r] = compute_rep(spec, chol, static_cast<std::uint64_t>(r)); });

  result_table table;
  for (std::size_t mi = 0; mi < spec.methods.size(); ++mi)
    table.rows.push_back(reduce_method(spec, mi, slots));
  return table;
}

namespace {

struct curve_slot {
  std::vector<double> in, out;
  double ols = kNaN, lasso = kNaN;
  double ratio_t = kNaN, ratio_mse = kNaN;
  bool ok = false;
};

void extend_flat(std::vector<double>& v, std::size_t len) {
  if (v.empty()) v.push_back(kNaN);
  while (v.size() < len) v.push_back(v.back());
}

} // namespace

curve_table step_curve(const curve_spec& spec, int workers) {
  spec.validate();
  const matrix chol = design_chol(spec.dgp);
  const std::size_t len = static_cast<std::size_t>(spec.max_steps) + 1;

  std::vector<curve_slot> slots(spec.repetitions);
  parallel_reps(spec.repetitions, workers, [&](long r) {
    curve_slot& slot = slots[r];
    sample smp;
    try {
      smp = generate_with(spec.dgp, chol, spec.master_seed, static_cast<std::uint64_t>(r));
    } catch (const error&) {
      return;
    }

    boosting_curves cvs;
    boost_path path;
    try {
      const std::size_t n1 = smp.holdout.n();
      std::vector<double> base(n1, 0.0);
      for (std::size_t j = 0; j < smp.holdout.p(); ++j) {
        const double b = smp.holdout.true_beta[j];
        if (b == 0.0) continue;
        auto xj = smp.holdout.x.col(j);
        for (std::size_t i = 0; i < n1; ++i) base[i] += b * xj[i];
      }
      std::vector<double> diff = base;
      std::vector<long> order;
      std::vector<char> seen(smp.train.p(), 0);
      slot.out.push_back(norm_sq_n(base));
      step_observer observer = [&](const boost_step& st, std::span<const double> beta) {
        if (!seen[st.j]) {
          seen[st.j] = 1;
          order.push_back(st.j);
        }
        if (spec.kind == variant::plain) {
          auto xj = smp.holdout.x.col(st.j);
          for (std::size_t i = 0; i < n1; ++i) diff[i] -= st.gamma * xj[i];
          slot.out.push_back(norm_sq_n(diff));
        } else {
          std::vector<double> d = base;
          for (long jj : order) {
            if (beta[jj] == 0.0) continue;
            auto xj = smp.holdout.x.col(jj);
            for (std::size_t i = 0; i < n1; ++i) d[i] -= beta[jj] * xj[i];
          }
          slot.out.push_back(norm_sq_n(d));
        }
      };
      boost_config cfg;
      cfg.nu = spec.nu;
      cfg.max_steps = spec.max_steps;
      cfg.kind = spec.kind;
      path = spec.kind == variant::plain ? run_ba(smp.train, cfg, stopping_rule::none(), observer)
                                         : run_oba(smp.train, cfg, stopping_rule::none(), observer);
      slot.in = path.pred_curve();
    } catch (const error&) {
      return;
    }
    extend_flat(slot.in, len);
    extend_flat(slot.out, len);
    slot.in.resize(len);
    slot.out.resize(len);
    slot.ok = true;

    try {
      stopping_rule rl = stopping_rule::ratio(spec.cu);
      const long t = ratio_stop_step(path.residual_curve(), ratio_threshold(rl, spec.dgp.n, spec.dgp.p));
      slot.ratio_t = static_cast<double>(t);
      slot.ratio_mse = slot.out[static_cast<std::size_t>(t)];
    } catch (const error&) {
    }
    if (spec.dgp.p < spec.dgp.n) {
      try {
        slot.ols = mse_out(smp.holdout, ols_solve(smp.train.x, smp.train.y));
      } catch (const error&) {
      }
    }
    try {
      const double lam = cv_lambda(smp.train, spec.lasso,
                                   rng_stream(spec.master_seed,
                                              0x8000000000000000ull + static_cast<std::uint64_t>(r)));
      slot.lasso = mse_out(smp.holdout, lasso_fit(smp.train, lam, spec.lasso).beta);
    } catch (const error&) {
    }
  });

  curve_table ct;
  ct.repetitions = spec.repetitions;
  ct.mse_in.assign(len, 0.0);
  ct.mse_out.assign(len, 0.0);
  long count = 0;
  double ols_sum = 0.0, lasso_sum = 0.0, rt_sum = 0.0, rmse_sum = 0.0;
  long ols_n = 0, lasso_n = 0, ratio_n = 0;
  for (const auto& slot : slots) {
    if (!slot.ok) continue;
    ++count;
    for (std::size_t m = 0; m < len; ++m) {
      ct.mse_in[m] += slot.in[m];
      ct.mse_out[m] += slot.out[m];
    }
    if (!std::isnan(slot.ols)) {
      ols_sum += slot.ols;
      ++ols_n;
    }
    if (!std::isnan(slot.lasso)) {
      lasso_sum += slot.lasso;
      ++lasso_n;
    }
    if (!std::isnan(slot.ratio_t)) {
      rt_sum += slot.ratio_t;
      rmse_sum += slot.ratio_mse;
      ++ratio_n;
    }
  }
  ct.failures = spec.repetitions - count;
  if (count > 0)
    for (std::size_t m = 0; m < len; ++m) {
      ct.mse_in[m] /= static_cast<double>(count);
      ct.mse_out[m] /= static_cast<double>(count);
    }
  else {
    ct.mse_in.assign(len, kNaN);
    ct.mse_out.assign(len, kNaN);
  }
  if (ols_n > 0) ct.ols_ref = ols_sum / static_cast<double>(ols_n);
  if (lasso_n > 0) ct.lasso_ref = lasso_sum / static_cast<double>(lasso_n);
  if (ratio_n > 0) {
    ct.ratio_stop_step = rt_sum / static_cast<double>(ratio_n);
    ct.ratio_stop_mse = rmse_sum / static_cast<double>(ratio_n);
  }
  return ct;
}

// ---------------------------------------------------------------------------
// JSON boundary

namespace {

using nlohmann::json;

json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    fail(errc::parse_error, std::string("spec JSON: ") + e.what());
  }
}

dgp_spec dgp_from(const json& j) {
  if (!j.is_object()) fail(errc::invalid_argument, "dgp must be an object");
  dgp_spec d;
  try {
    d.betas = beta_design_from(j.value("beta_design", "sparse"));
    d.xs = x_design_from(j.value("x_design", "iid"));
    d.n = j.value("n", 100u);
    d.p = j.value("p", 100u);
    d.s = j.value("s", 10u);
    d.noise_sd = j.value("noise_sd", d.betas == beta_design::illustrative ? 2.0 : 1.0);
    d.holdout = j.value("holdout", 50u);
  } catch (const json::exception& e) {
    fail(errc::invalid_argument, std::string("dgp: ") + e.what());
  }
  d.validate();
  return d;
}

method_spec method_from(const json& j) {
  if (!j.is_object()) fail(errc::invalid_argument, "method must be an object");
  method_spec m;
  try {
    const std::string est = j.value("estimator", "ba");
    if (est == "ba")
      m.estimator = estimator_kind::ba;
    else if (est == "post-ba")
      m.estimator = estimator_kind::post_ba;
    else if (est == "oba")
      m.estimator = estimator_kind::oba;
    else if (est == "lasso")
      m.estimator = estimator_kind::lasso;
    else if (est == "post-lasso")
      m.estimator = estimator_kind::post_lasso;
    else
      fail(errc::invalid_argument, "unknown estimator '" + est + "'");

    if (m.is_lasso()) {
      const std::string pen = j.value("penalty", "plugin");
      if (pen == "plugin")
        m.penalty = penalty_kind::plugin;
      else if (pen == "cv")
        m.penalty = penalty_kind::cv;
      else
        fail(errc::invalid_argument, "unknown penalty '" + pen + "'");
    } else {
      const std::string stop = j.value("stop", "oracle");
      if (stop == "oracle")
        m.rule = rule_kind::oracle;
      else if (stop == "ks")
        m.rule = rule_kind::ks;
      else if (stop == "ratio")
        m.rule = rule_kind::ratio;
      else if (stop == "fixed")
        m.rule = rule_kind::fixed;
      else
        fail(errc::invalid_argument, "unknown stop rule '" + stop + "'");
    }
    m.k = j.value("k", 2);
    m.m_fixed = j.value("m", 0);
    m.cu = j.value("cu", 4.5);
    m.alpha = j.value("alpha", 0.05);
  } catch (const json::exception& e) {
    fail(errc::invalid_argument, std::string("method: ") + e.what());
  }
  m.validate();
  return m;
}

lasso_config lasso_from(const json& j, lasso_config base) {
  try {
    base.convergence_tol = j.value("tol", base.convergence_tol);
    base.max_sweeps = j.value("max_sweeps", base.max_sweeps);
    base.folds = j.value("folds", base.folds);
    base.grid_size = j.value("grid_size", base.grid_size);
    base.alpha = j.value("alpha", base.alpha);
  } catch (const json::exception& e) {
    fail(errc::invalid_argument, std::string("lasso config: ") + e.what());
  }
  return base;
}

experiment_spec experiment_from(const json& j) {
  if (!j.is_object()) fail(errc::invalid_argument, "experiment spec must be a JSON object");
  experiment_spec spec;
  try {
    if (j.contains("dgp")) spec.dgp = dgp_from(j.at("dgp"));
    if (!j.contains("methods") || !j.at("methods").is_array() || j.at("methods").empty())
      fail(errc::invalid_argument, "experiment needs a nonempty methods array");
    for (const auto& mj : j.at("methods")) spec.methods.push_back(method_from(mj));
    spec.repetitions = j.value("repetitions", 100);
    spec.master_seed = j.value("master_seed", std::uint64_t{1});
    spec.max_steps = j.value("max_steps", 1000);
    spec.nu = j.value("nu", 1.0);
    if (j.contains("lasso")) spec.lasso = lasso_from(j.at("lasso"), spec.lasso);
  } catch (const json::exception& e) {
    fail(errc::invalid_argument, std::string("experiment: ") + e.what());
  }
  spec.validate();
  return spec;
}

json dgp_to(const dgp_spec& d) {
  return json{{"n", d.n},
              {"p", d.p},
              {"s", d.s},
              {"beta_design", to_string(d.betas)},
              {"x_design", to_string(d.xs)},
              {"noise_sd", d.noise_sd},
              {"holdout", d.holdout}};
}

json method_to(const method_spec& m) {
  json j;
  switch (m.estimator) {
    case estimator_kind::ba: j["estimator"] = "ba"; break;
    case estimator_kind::post_ba: j["estimator"] = "post-ba"; break;
    case estimator_kind::oba: j["estimator"] = "oba"; break;
    case estimator_kind::lasso: j["estimator"] = "lasso"; break;
    case estimator_kind::post_lasso: j["estimator"] = "post-lasso"; break;
  }
  if (m.is_lasso()) {
    j["penalty"] = m.penalty == penalty_kind::plugin ? "plugin" : "cv";
    j["alpha"] = m.alpha;
  } else {
    switch (m.rule) {
      case rule_kind::oracle: j["stop"] = "oracle"; break;
      case rule_kind::ks:
        j["stop"] = "ks";
        j["k"] = m.k;
        break;
      case rule_kind::ratio:
        j["stop"] = "ratio";
        j["cu"] = m.cu;
        break;
      case rule_kind::fixed:
        j["stop"] = "fixed";
        j["m"] = m.m_fixed;
        break;
    }
  }
  return j;
}

json lasso_to(const lasso_config& c) {
  return json{{"tol", c.convergence_tol},
              {"max_sweeps", c.max_sweeps},
              {"folds", c.folds},
              {"grid_size", c.grid_size},
              {"alpha", c.alpha}};
}

} // namespace

experiment_spec experiment_from_json(const std::string& text) {
  return experiment_from(parse_text(text));
}

std::vector<experiment_spec> experiments_from_json(const std::string& text) {
  const json j = parse_text(text);
  if (!j.is_object()) fail(errc::invalid_argument, "experiment spec must be a JSON object");
  if (!j.contains("dgps")) return {experiment_from(j)};
  if (!j.at("dgps").is_array() || j.at("dgps").empty())
    fail(errc::invalid_argument, "dgps must be a nonempty array");

  std::vector<experiment_spec> out;
  std::size_t index = 0;
  for (const auto& dj : j.at("dgps")) {
    json one = j;
    one.erase("dgps");
    one["dgp"] = dj;
    experiment_spec spec = experiment_from(one);
    spec.master_seed += index; // distinct substreams per grid entry
    out.push_back(std::move(spec));
    ++index;
  }
  return out;
}

curve_spec curve_from_json(const std::string& text) {
  const json j = parse_text(text);
  if (!j.is_object()) fail(errc::invalid_argument, "curve spec must be a JSON object");
  curve_spec spec;
  try {
    if (j.contains("dgp")) spec.dgp = dgp_from(j.at("dgp"));
    spec.repetitions = j.value("repetitions", 60);
    spec.max_steps = j.value("max_steps", 40);
    spec.nu = j.value("nu", 1.0);
    const std::string kind = j.value("variant", "plain");
    if (kind == "plain")
      spec.kind = variant::plain;
    else if (kind == "orthogonal")
      spec.kind = variant::orthogonal;
    else
      fail(errc::invalid_argument, "unknown variant '" + kind + "'");
    spec.cu = j.value("cu", 4.5);
    spec.master_seed = j.value("master_seed", std::uint64_t{1});
    if (j.contains("lasso")) spec.lasso = lasso_from(j.at("lasso"), spec.lasso);
  } catch (const json::exception& e) {
    fail(errc::invalid_argument, std::string("curve: ") + e.what());
  }
  spec.validate();
  return spec;
}

std::string experiment_to_json(const experiment_spec& spec) {
  json j;
  j["dgp"] = dgp_to(spec.dgp);
  j["methods"] = json::array();
  for (const auto& m : spec.methods) j["methods"].push_back(method_to(m));
  j["repetitions"] = spec.repetitions;
  j["master_seed"] = spec.master_seed;
  j["max_steps"] = spec.max_steps;
  j["nu"] = spec.nu;
  j["lasso"] = lasso_to(spec.lasso);
  return j.dump(2);
}

std::string curve_to_json(const curve_spec& spec) {
  json j;
  j["dgp"] = dgp_to(spec.dgp);
  j["repetitions"] = spec.repetitions;
  j["max_steps"] = spec.max_steps;
  j["nu"] = spec.nu;
  j["variant"] = spec.kind == variant::plain ? "plain" : "orthogonal";
  j["cu"] = spec.cu;
  j["master_seed"] = spec.master_seed;
  j["lasso"] = lasso_to(spec.lasso);
  return j.dump(2);
}

std::string preset_json(const std::string& name) {
  if (name == "table3") {
    return R"({
  "dgps": [
    {"n": 100, "p": 100, "s": 10, "beta_design": "sparse", "x_design": "iid", "noise_sd": 1.0, "holdout": 50},
    {"n": 100, "p": 200, "s": 10, "beta_design": "sparse", "x_design": "iid", "noise_sd": 1.0, "holdout": 50},
    {"n": 200, "p": 100, "s": 10, "beta_design": "sparse", "x_design": "iid", "noise_sd": 1.0, "holdout": 50},
    {"n": 200, "p": 200, "s": 10, "beta_design": "sparse", "x_design": "iid", "noise_sd": 1.0, "holdout": 50},
    {"n": 400, "p": 100, "s": 10, "beta_design": "sparse", "x_design": "iid", "noise_sd": 1.0, "holdout": 50},
    {"n": 400, "p": 200, "s": 10, "beta_design": "sparse", "x_design": "iid", "noise_sd": 1.0, "holdout": 50}
  ],
  "methods": [
    {"estimator": "ba", "stop": "oracle"},
    {"estimator": "ba", "stop": "ks", "k": 2},
    {"estimator": "ba", "stop": "ratio", "cu": 4.5},
    {"estimator": "post-ba", "stop": "oracle"},
    {"estimator": "post-ba", "stop": "ks", "k": 2},
    {"estimator": "post-ba", "stop": "ratio", "cu": 4.5},
    {"estimator": "oba", "stop": "oracle"},
    {"estimator": "oba", "stop": "ks", "k": 2},
    {"estimator": "oba", "stop": "ratio", "cu": 4.5},
    {"estimator": "lasso", "penalty": "plugin", "alpha": 0.05},
    {"estimator": "post-lasso", "penalty": "plugin", "alpha": 0.05}
  ],
  "repetitions": 500,
  "master_seed": 101,
  "max_steps": 800,
  "nu": 1.0
}
)";
  }
  if (name == "illustrative") {
    return R"({
  "dgp": {"n": 20, "p": 10, "s": 3, "beta_design": "illustrative", "x_design": "iid", "noise_sd": 2.0, "holdout": 50},
  "repetitions": 60,
  "max_steps": 40,
  "nu": 1.0,
  "variant": "plain",
  "cu": 4.5,
  "master_seed": 101
}
)";
  }
  fail(errc::invalid_argument, "unknown preset '" + name + "'");
}

void write_table_csv(const result_table& table, const std::string& path) {
  csv_writer w(path);
  w.row({"n", "p", "s", "beta_design", "x_design", "noise_sd", "holdout", "method", "repetitions",
         "failures", "mse_mean", "mse_se", "mean_stop_step", "mean_support_size"});
  for (const auto& r : table.rows) {
    w.row({std::to_string(r.dgp.n), std::to_string(r.dgp.p), std::to_string(r.dgp.s),
           to_string(r.dgp.betas), to_string(r.dgp.xs), format_g12(r.dgp.noise_sd),
           std::to_string(r.dgp.holdout), r.method, std::to_string(r.repetitions),
           std::to_string(r.failures), std::isnan(r.mse_mean) ? "" : format_g12(r.mse_mean),
           std::isnan(r.mse_se) ? "" : format_g12(r.mse_se),
           std::isnan(r.mean_stop_step) ? "" : format_g12(r.mean_stop_step),
           std::isnan(r.mean_support) ? "" : format_g12(r.mean_support)});
  }
}

void write_curve_csv(const curve_table& curve, const std::string& path) {
  csv_writer w(path);
  w.row({"m", "mse_in", "mse_out", "ols_ref", "lasso_ref"});
  for (std::size_t m = 0; m < curve.mse_out.size(); ++m) {
    w.row({std::to_string(m), std::isnan(curve.mse_in[m]) ? "" : format_g12(curve.mse_in[m]),
           std::isnan(curve.mse_out[m]) ? "" : format_g12(curve.mse_out[m]),
           std::isnan(curve.ols_ref) ? "" : format_g12(curve.ols_ref),
           std::isnan(curve.lasso_ref) ? "" : format_g12(curve.lasso_ref)});
  }
}

} // namespace l2boost
