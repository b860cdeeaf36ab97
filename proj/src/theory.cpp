#include "theory.hpp"

#include "csv.hpp"
#include "errors.hpp"
#include "rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace l2boost {

namespace {

void check_c(double c) {
  if (!(c >= 0.0) || !(c < 1.0)) fail(errc::domain_error, "c must lie in [0, 1)");
}

} // namespace

double mu_a(double c) {
  check_c(c);
  const double one_c = 1.0 - c;
  return 1.0 - std::pow(1.0 + 1.0 / (one_c * one_c), -1.0 / one_c);
}

double mu_e(double c) {
  check_c(c);
  const double one_c = 1.0 - c;
  return 1.0 - std::exp(-1.0 / (one_c * one_c));
}

double zeta(double c, double lambda) {
  check_c(c);
  const double ma = mu_a(c);
  const double boundary = ma / (1.0 - ma);
  if (!(lambda >= boundary)) fail(errc::domain_error, "lambda below mu_a / (1 - mu_a)");
  const double num = (1.0 - ma) * lambda - ma;
  const double den = (2.0 + lambda) * std::log((2.0 + lambda) / (2.0 - ma));
  return num / den + (1.0 - c);
}

theory_constants zeta_star(double c) {
  check_c(c);
  theory_constants out;
  out.c = c;
  out.mu_a = mu_a(c);
  out.mu_e = mu_e(c);

  const double lo = out.mu_a / (1.0 - out.mu_a);
  const double hi = 1e4;
  if (lo >= hi) fail(errc::domain_error, "maximization domain is empty below the 1e4 truncation");

  // coarse bracket on a log(2 + lambda) grid
  const int grid = 512;
  const double ulo = std::log(2.0 + lo);
  const double uhi = std::log(2.0 + hi);
  int best_i = 0;
  double best_v = -1.0;
  auto lam_at = [&](int i) { return std::exp(ulo + (uhi - ulo) * i / static_cast<double>(grid - 1)) - 2.0; };
  for (int i = 0; i < grid; ++i) {
    const double lam = std::min(hi, std::max(lo, lam_at(i)));
    const double v = zeta(c, lam);
    if (v > best_v) {
      best_v = v;
      best_i = i;
    }
  }

  double a = std::max(lo, lam_at(std::max(0, best_i - 1)));
  double b = std::min(hi, lam_at(std::min(grid - 1, best_i + 1)));
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - gr * (b - a);
  double x2 = a + gr * (b - a);
  double f1 = zeta(c, x1);
  double f2 = zeta(c, x2);
  while (b - a > 1e-6) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = zeta(c, x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = zeta(c, x1);
    }
  }
  out.lambda_star = 0.5 * (a + b);
  out.zeta_star = zeta(c, out.lambda_star);
  if (best_v > out.zeta_star) { // max sat at a coarse grid point (e.g. the truncation edge)
    out.zeta_star = best_v;
    out.lambda_star = std::min(hi, std::max(lo, lam_at(best_i)));
  }
  out.rate = out.zeta_star / (1.0 + out.zeta_star);
  return out;
}

double lambda_n(double sigma, long p, long n, double alpha) {
  if (sigma < 0.0) fail(errc::domain_error, "sigma must be >= 0");
  if (p < 1 || n < 1) fail(errc::domain_error, "p and n must be >= 1");
  if (!(alpha > 0.0) || !(alpha < 1.0)) fail(errc::domain_error, "alpha must lie in (0, 1)");
  return 2.0 * sigma * std::sqrt(std::log(2.0 * static_cast<double>(p) / alpha) / static_cast<double>(n));
}

double delta_naive(long q, long q1, double c) {
  check_c(c);
  if (q < 1 || q1 <= q) fail(errc::domain_error, "need q >= 1 and q1 > q");
  double prod = 1.0;
  for (long j = 0; j < q1 - q; ++j) prod *= 1.0 - (1.0 - c) / static_cast<double>(q + j);
  return prod;
}

namespace {

double count_combinations(long p, long s) {
  double v = 1.0;
  for (long i = 0; i < s; ++i) {
    v *= static_cast<double>(p - i) / static_cast<double>(i + 1);
    if (v > 1e18) return 1e18;
  }
  return v;
}

matrix gram_of(const dataset& ds) {
  const std::size_t p = ds.p();
  matrix g(p, p);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      const double v = inner_n(ds.x.col(i), ds.x.col(j));
      g(i, j) = v;
      g(j, i) = v;
    }
  return g;
}

std::pair<double, double> subset_range(const matrix& gram, const std::vector<long>& idx) {
  const std::size_t k = idx.size();
  if (k == 1) {
    const double d = gram(idx[0], idx[0]);
    return {d, d};
  }
  matrix sub(k, k);
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b) sub(a, b) = gram(idx[a], idx[b]);
  return sym_eigen_range(sub);
}

bool next_combination(std::vector<long>& idx, long p) {
  const long k = static_cast<long>(idx.size());
  for (long i = k - 1; i >= 0; --i) {
    if (idx[i] < p - k + i) {
      ++idx[i];
      for (long j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
      return true;
    }
  }
  return false;
}

} // namespace

eigen_report restricted_eigen_scan(const dataset& ds, long s_max, long budget, std::uint64_t seed) {
  if (s_max < 1 || s_max > 20) fail(errc::invalid_argument, "s_max must lie in 1..20");
  if (budget < 1) fail(errc::invalid_argument, "budget must be >= 1");
  const long p = static_cast<long>(ds.p());
  const long smax = std::min<long>(s_max, p);
  const matrix gram = gram_of(ds);

  eigen_report rep;
  rep.p = p;
  rep.s_max = smax;
  rep.exhaustive = true;

  std::vector<long> worst_min_subset;
  std::vector<long> worst_max_subset;
  double run_min = std::numeric_limits<double>::infinity();
  double run_max = -std::numeric_limits<double>::infinity();

  for (long s = 1; s <= smax; ++s) {
    double size_min = std::numeric_limits<double>::infinity();
    double size_max = -std::numeric_limits<double>::infinity();
    std::vector<long> argmin_subset;
    std::vector<long> argmax_subset;

    auto consider = [&](const std::vector<long>& idx) {
      const auto [lo, hi] = subset_range(gram, idx);
      if (lo < size_min) {
        size_min = lo;
        argmin_subset = idx;
      }
      if (hi > size_max) {
        size_max = hi;
        argmax_subset = idx;
      }
    };

    const bool exhaustive = count_combinations(p, s) <= static_cast<double>(budget);
    if (exhaustive) {
      std::vector<long> idx(s);
      std::iota(idx.begin(), idx.end(), 0L);
      do {
        consider(idx);
      } while (next_combination(idx, p));
    } else {
      rep.exhaustive = false;
      rng_stream stream(seed, static_cast<std::uint64_t>(s));
      std::vector<long> pool(p);
      std::iota(pool.begin(), pool.end(), 0L);
      std::vector<long> idx(s);
      for (long b = 0; b < budget; ++b) {
        for (long i = 0; i < s; ++i) {
          const long k = i + static_cast<long>(stream.next_u64() % static_cast<std::uint64_t>(p - i));
          std::swap(pool[i], pool[k]);
          idx[i] = pool[i];
        }
        std::sort(idx.begin(), idx.end());
        consider(idx);
      }
      // greedy adversarial extensions of the previous size's extremes
      auto extend = [&](const std::vector<long>& base) {
        if (base.empty() || static_cast<long>(base.size()) != s - 1) return;
        std::vector<char> in(p, 0);
        for (long j : base) in[j] = 1;
        std::vector<long> idx2(base.begin(), base.end());
        idx2.push_back(0);
        for (long j = 0; j < p; ++j) {
          if (in[j]) continue;
          idx2.back() = j;
          consider(idx2);
        }
      };
      extend(worst_min_subset);
      extend(worst_max_subset);
    }

    rep.size_exhaustive.push_back(exhaustive ? 1 : 0);
    worst_min_subset = argmin_subset;
    worst_max_subset = argmax_subset;
    run_min = std::min(run_min, size_min);
    run_max = std::max(run_max, size_max);
    rep.phi_small.push_back(run_min);
    rep.phi_large.push_back(run_max);
  }

  const double c_raw = 1.0 - rep.phi_small.back();
  rep.c = std::clamp(c_raw, 0.0, 1.0);
  rep.degenerate = c_raw >= 1.0 - 1e-12;
  return rep;
}

void write_eigen_csv(const eigen_report& report, const std::string& file) {
  csv_writer w(file);
  w.row({"s", "phi_small", "phi_large", "exhaustive", "c_running"});
  for (long s = 1; s <= report.s_max; ++s) {
    const double c_run = std::clamp(1.0 - report.phi_small[s - 1], 0.0, 1.0);
    w.row({std::to_string(s), format_g12(report.phi_small[s - 1]), format_g12(report.phi_large[s - 1]),
           report.size_exhaustive[s - 1] ? "1" : "0", format_g12(c_run)});
  }
}

dataset pga_dataset(std::span<const double> beta, const matrix& design) {
  if (beta.size() != design.cols()) fail(errc::length_mismatch, "beta length differs from design columns");
  const std::size_t n = design.rows();
  std::vector<double> y(n, 0.0);
  for (std::size_t j = 0; j < design.cols(); ++j) {
    const double b = beta[j];
    if (b == 0.0) continue;
    const auto col = design.col(j);
    for (std::size_t i = 0; i < n; ++i) y[i] += b * col[i];
  }

  bool standardized = true;
  for (std::size_t j = 0; j < design.cols() && standardized; ++j) {
    const auto col = design.col(j);
    double mu = 0.0;
    for (double v : col) mu += v;
    mu /= static_cast<double>(n);
    if (std::abs(mu) > 1e-8 || std::abs(norm_sq_n(col) - 1.0) > 1e-8) standardized = false;
  }

  dataset ds;
  if (standardized) {
    ds = wrap_prestandardized(design, std::move(y), true);
    ds.true_beta.assign(beta.begin(), beta.end());
  } else {
    ds = standardize(design, std::move(y), true);
    ds.true_beta.resize(beta.size());
    for (std::size_t j = 0; j < beta.size(); ++j) ds.true_beta[j] = beta[j] * ds.scales[j];
  }
  return ds;
}

boost_path run_pga(std::span<const double> beta, const matrix& design, long max_steps) {
  const dataset ds = pga_dataset(beta, design);
  boost_config cfg;
  cfg.nu = 1.0;
  cfg.max_steps = max_steps;
  return run_ba(ds, cfg, stopping_rule::none());
}

namespace {

struct recomputed_curves {
  std::vector<double> resid_sq; // model-indexed
  std::vector<double> pred_sq;
};

// Bound checks recompute each model's residual and prediction error from the
// coefficient vector, so late steps near the numerical floor are not polluted
// by the runner's incremental updates.
recomputed_curves recompute(const dataset& ds, const boost_path& path) {
  recomputed_curves out;
  const long models = path.models();
  std::vector<double> xb_true(ds.n(), 0.0);
  for (std::size_t j = 0; j < ds.p(); ++j) {
    const double b = ds.true_beta[j];
    if (b == 0.0) continue;
    const auto col = ds.x.col(j);
    for (std::size_t i = 0; i < ds.n(); ++i) xb_true[i] += b * col[i];
  }
  for (long t = 0; t <= models; ++t) {
    const auto beta = path.beta_at(t);
    std::vector<double> fitted(ds.n(), 0.0);
    for (std::size_t j = 0; j < ds.p(); ++j) {
      const double b = beta[j];
      if (b == 0.0) continue;
      const auto col = ds.x.col(j);
      for (std::size_t i = 0; i < ds.n(); ++i) fitted[i] += b * col[i];
    }
    double usq = 0.0;
    double vsq = 0.0;
    for (std::size_t i = 0; i < ds.n(); ++i) {
      const double u = ds.y[i] - fitted[i];
      const double v = xb_true[i] - fitted[i];
      usq += u * u;
      vsq += v * v;
    }
    out.resid_sq.push_back(usq / static_cast<double>(ds.n()));
    out.pred_sq.push_back(vsq / static_cast<double>(ds.n()));
  }
  return out;
}

void finish(bound_report& rep) {
  for (const auto& s : rep.steps) rep.worst_slack = std::min(rep.worst_slack, s.slack);
  rep.violated = !rep.steps.empty() && rep.worst_slack < -rep.tolerance;
}

} // namespace

std::vector<bound_report> check_bounds(const dataset& ds, const boost_path& path, const eigen_report& report,
                                       const bound_check_options& options) {
  if (!ds.has_truth()) fail(errc::invalid_argument, "bound checks need true coefficients on the dataset");
  if (report.degenerate || report.c >= 1.0) fail(errc::domain_error, "eigen scan implies c >= 1");
  const double c = report.c;
  const double tol = options.tolerance;
  const bool advisory_scan = !report.exhaustive;

  std::vector<long> support;
  for (std::size_t j = 0; j < ds.p(); ++j)
    if (ds.true_beta[j] != 0.0) support.push_back(static_cast<long>(j));
  const long s = static_cast<long>(support.size());

  std::vector<double> eps(ds.n());
  {
    std::vector<double> xb(ds.n(), 0.0);
    for (long j : support) {
      const auto col = ds.x.col(j);
      for (std::size_t i = 0; i < ds.n(); ++i) xb[i] += ds.true_beta[j] * col[i];
    }
    for (std::size_t i = 0; i < ds.n(); ++i) eps[i] = ds.y[i] - xb[i];
  }
  const double sigma_n_sq = norm_sq_n(eps);
  const bool noiseless = sigma_n_sq < 1e-18 * std::max(1.0, norm_sq_n(ds.y));

  const auto curves = recompute(ds, path);
  const auto revisit = revisit_analysis(path, support);
  const long models = path.models();

  // q at entry to 0-based step i: s plus fresh selections among steps 0..i-1
  auto q_entry = [&](long i) { return i == 0 ? s : revisit.q[i - 1]; };

  std::vector<bound_report> out;

  if (noiseless) {
    {
      bound_report rep;
      rep.name = "step-ratio";
      rep.tolerance = tol;
      rep.advisory = advisory_scan;
      for (long i = 0; i < models; ++i) {
        const long q = q_entry(i);
        if (q > report.s_max) {
          ++rep.skipped_steps;
          continue;
        }
        if (!(curves.pred_sq[i] > 0.0)) continue;
        const double ratio = curves.pred_sq[i + 1] / curves.pred_sq[i];
        const double limit = 1.0 - (1.0 - c) / static_cast<double>(q);
        rep.steps.push_back({i, ratio, limit, limit - ratio});
      }
      if (rep.steps.empty() && rep.skipped_steps == models && models > 0)
        fail(errc::insufficient_eigen_scan, "every step's q(m) exceeds the scanned sizes");
      finish(rep);
      out.push_back(std::move(rep));
    }
    {
      const double me = mu_e(c);
      bound_report rep;
      rep.name = "revisit-floor-finite";
      rep.tolerance = tol;
      rep.advisory = advisory_scan;
      for (long m = 1; m <= models; ++m) {
        if (revisit.q[m - 1] > report.s_max) {
          ++rep.skipped_steps;
          continue;
        }
        const double floor_m = (1.0 - me) / (2.0 - me) * static_cast<double>(m) -
                               me / (2.0 - me) * static_cast<double>(s);
        const double count = static_cast<double>(revisit.revisit_count[m - 1]);
        rep.steps.push_back({m, count, floor_m, count - floor_m});
      }
      finish(rep);
      out.push_back(std::move(rep));
    }
    {
      const double ma_d = (1.0 + options.delta) * mu_a(c);
      bound_report rep;
      rep.name = "revisit-floor-asymptotic";
      rep.tolerance = tol;
      rep.advisory = advisory_scan || s < 10;
      if (ma_d < 2.0) {
        for (long m = 1; m <= models; ++m) {
          if (revisit.q[m - 1] > report.s_max) {
            ++rep.skipped_steps;
            continue;
          }
          const double floor_m = (1.0 - ma_d) / (2.0 - ma_d) * static_cast<double>(m) -
                                 ma_d / (2.0 - ma_d) * static_cast<double>(s);
          const double count = static_cast<double>(revisit.revisit_count[m - 1]);
          rep.steps.push_back({m, count, floor_m, count - floor_m});
        }
      }
      finish(rep);
      out.push_back(std::move(rep));
    }
    {
      bound_report rep;
      rep.name = "decay-constant";
      rep.tolerance = tol;
      rep.advisory = true; // reported, never pass/fail: the constant is existential
      rep.worst_slack = 0.0;
      // for an ill-conditioned design the optimized exponent has no admissible
      // lambda; the report then stays empty rather than blocking other bounds
      if (c < 0.7) {
        const auto tc = zeta_star(c);
        const double expo = tc.zeta_star - options.delta;
        double cfit = 0.0;
        if (curves.pred_sq[0] > 0.0 && s > 0) {
          for (long m = 1; m <= models; ++m) {
            const double envelope = std::pow(static_cast<double>(s) / static_cast<double>(m + s), expo);
            const double ratio = curves.pred_sq[m] / curves.pred_sq[0];
            rep.steps.push_back({m, ratio, envelope, envelope - ratio});
            if (envelope > 0.0) cfit = std::max(cfit, ratio / envelope);
          }
        }
        rep.fitted_constant = cfit;
      } else {
        rep.skipped_steps = models;
      }
      out.push_back(std::move(rep));
    }
    {
      // advisory cap on maximal consecutive runs of fresh selections
      bound_report rep;
      rep.name = "fresh-run-length";
      rep.tolerance = tol;
      rep.advisory = true;
      const double base = (1.0 + options.delta) * (2.0 - c) * (1.0 + c) / ((2.0 + c) * (1.0 - c));
      const double factor = std::pow(base, 1.0 / (1.0 - c)) - 1.0;
      long i = 0;
      while (i < models) {
        if (revisit.labels[i] != 'N') {
          ++i;
          continue;
        }
        long k = i;
        while (k < models && revisit.labels[k] == 'N') ++k;
        const long run = k - i;
        const long q_at = revisit.q[i]; // q at the run's first step, inclusive
        if (q_at <= report.s_max) {
          const double cap = factor * static_cast<double>(q_at);
          rep.steps.push_back({i, static_cast<double>(run), cap, cap - static_cast<double>(run)});
        } else {
          ++rep.skipped_steps;
        }
        i = k;
      }
      finish(rep);
      out.push_back(std::move(rep));
    }
  }

  if (!noiseless && options.lambda_n > 0.0) {
    bound_report rep;
    rep.name = "noise-envelope";
    rep.tolerance = tol;
    rep.advisory = advisory_scan;
    for (long t = 0; t <= models; ++t) {
      const double z = curves.resid_sq[t] - curves.pred_sq[t];
      const double dev = std::abs(z - sigma_n_sq);
      const double limit = 2.0 * std::sqrt(static_cast<double>(t + s)) / std::sqrt(1.0 - c) * options.lambda_n *
                           std::sqrt(curves.pred_sq[t]);
      rep.steps.push_back({t, dev, limit, limit - dev});
    }
    finish(rep);
    out.push_back(std::move(rep));
  }

  return out;
}

void write_bounds_csv(const std::vector<bound_report>& reports, const std::string& file) {
  csv_writer w(file);
  w.row({"bound", "row", "m", "observed", "limit", "slack", "advisory", "violated"});
  for (const auto& rep : reports) {
    const std::string adv = rep.advisory ? "1" : "0";
    for (const auto& st : rep.steps)
      w.row({rep.name, "step", std::to_string(st.m), format_g12(st.observed), format_g12(st.limit),
             format_g12(st.slack), adv, ""});
    if (!std::isnan(rep.fitted_constant))
      w.row({rep.name, "fitted", "", format_g12(rep.fitted_constant), "", "", adv, ""});
    w.row({rep.name, "summary", "",
           rep.steps.empty() ? "" : format_g12(rep.worst_slack), "", "", adv, rep.violated ? "1" : "0"});
  }
}

} // namespace l2boost
