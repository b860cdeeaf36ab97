#include "boosting.hpp"
#include "dataset.hpp"
#include "errors.hpp"
#include "rng.hpp"
#include "theory.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <vector>

using namespace l2boost;

namespace {

matrix helmert(std::size_t p) {
  const std::size_t n = p + 1;
  matrix x(n, p);
  const double root_n = std::sqrt(static_cast<double>(n));
  for (std::size_t k = 1; k <= p; ++k) {
    const double denom = std::sqrt(static_cast<double>(k) * static_cast<double>(k + 1));
    for (std::size_t i = 0; i < k; ++i) x(i, k - 1) = root_n / denom;
    x(k, k - 1) = -root_n * static_cast<double>(k) / denom;
  }
  return x;
}

matrix random_design(std::size_t n, std::size_t p, std::uint64_t seed) {
  rng_stream s(seed, 0);
  matrix x(n, p);
  for (std::size_t j = 0; j < p; ++j)
    for (std::size_t i = 0; i < n; ++i) x(i, j) = s.next_gaussian();
  return x;
}

} // namespace

TEST_SUITE_BEGIN("theory");

TEST_CASE("revisit-share constants at c = 0") {
  CHECK(mu_a(0.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(mu_e(0.0) == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-12));
  // both grow toward 1 with c
  CHECK(mu_a(0.3) > mu_a(0.0));
  CHECK(mu_e(0.3) > mu_e(0.0));
  CHECK(mu_a(0.3) < 1.0);
  CHECK(mu_e(0.3) < 1.0);
  CHECK_THROWS_AS((void)mu_a(1.0), error);
  CHECK_THROWS_AS((void)mu_e(-0.1), error);
}

TEST_CASE("optimized rate constants reproduce the reference table") {
  // frozen oracle values computed from the closed form at 1e-6 lambda accuracy
  struct row {
    double c, zeta, rate;
  };
  const row rows[] = {
      {0.0, 1.1867, 0.5427},
      {0.1, 1.0370, 0.5091},
      {0.2, 0.8907, 0.4711},
      {0.3, 0.7515, 0.4291},
  };
  for (const auto& r : rows) {
    const theory_constants tc = zeta_star(r.c);
    CHECK(tc.zeta_star == doctest::Approx(r.zeta).epsilon(2e-4));
    CHECK(tc.rate == doctest::Approx(r.rate).epsilon(2e-4));
    CHECK(tc.rate == doctest::Approx(tc.zeta_star / (1.0 + tc.zeta_star)).epsilon(1e-12));
    // the maximizer is admissible and locally optimal
    CHECK(tc.lambda_star >= tc.mu_a / (1.0 - tc.mu_a));
    CHECK(zeta(r.c, tc.lambda_star) == doctest::Approx(tc.zeta_star).epsilon(1e-10));
    CHECK(zeta(r.c, tc.lambda_star * 1.05) <= tc.zeta_star + 1e-9);
    CHECK(zeta(r.c, std::max(tc.mu_a / (1.0 - tc.mu_a), tc.lambda_star * 0.95)) <=
          tc.zeta_star + 1e-9);
  }
}

TEST_CASE("zeta rejects lambda below the admissible boundary") {
  const double ma = mu_a(0.0);
  CHECK_THROWS_AS((void)zeta(0.0, ma / (1.0 - ma) - 1e-6), error);
  CHECK_NOTHROW((void)zeta(0.0, ma / (1.0 - ma)));
}

TEST_CASE("noise level follows the 2 sigma sqrt(log(2p/alpha)/n) recipe") {
  CHECK(lambda_n(1.0, 50, 100, 0.05) ==
        doctest::Approx(2.0 * std::sqrt(std::log(2.0 * 50.0 / 0.05) / 100.0)).epsilon(1e-14));
  CHECK(lambda_n(0.0, 10, 10, 0.5) == 0.0);
  CHECK_THROWS_AS((void)lambda_n(-1.0, 10, 10, 0.5), error);
  CHECK_THROWS_AS((void)lambda_n(1.0, 10, 10, 1.5), error);
}

TEST_CASE("naive decay product multiplies the per-step factors") {
  // q = 2, q1 = 4, c = 0: (1 - 1/2)(1 - 1/3) = 1/3
  CHECK(delta_naive(2, 4, 0.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  // c = 0.4: (1 - 0.6/2)(1 - 0.6/3)
  CHECK(delta_naive(2, 4, 0.4) == doctest::Approx(0.7 * 0.8).epsilon(1e-14));
  CHECK_THROWS_AS((void)delta_naive(0, 3, 0.0), error);
  CHECK_THROWS_AS((void)delta_naive(3, 3, 0.0), error);
}

TEST_CASE("eigen scan reports exact unity spectrum for an orthonormal design") {
  const matrix h = helmert(5);
  std::vector<double> y(h.rows(), 0.0);
  const dataset ds = wrap_prestandardized(h, y, false);
  const eigen_report rep = restricted_eigen_scan(ds, 4, 1000);
  CHECK(rep.p == 5);
  CHECK(rep.s_max == 4);
  CHECK(rep.exhaustive);
  CHECK_FALSE(rep.degenerate);
  REQUIRE(rep.phi_small.size() == 4);
  for (int i = 0; i < 4; ++i) {
    CHECK(rep.phi_small[i] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(rep.phi_large[i] == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(rep.size_exhaustive[i] == 1);
  }
  CHECK(rep.c == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("eigen scan finds the exact extremes of a correlated pair") {
  // two unit columns with empirical correlation exactly -1/2:
  // Gram eigenvalues at size 2 are 1/2 and 3/2
  const matrix h = helmert(2);
  matrix x(h.rows(), 2);
  for (std::size_t i = 0; i < h.rows(); ++i) {
    x(i, 0) = h(i, 0);
    x(i, 1) = -0.5 * h(i, 0) + (std::sqrt(3.0) / 2.0) * h(i, 1);
  }
  std::vector<double> y(h.rows(), 0.0);
  const dataset ds = wrap_prestandardized(x, y, false);
  const eigen_report rep = restricted_eigen_scan(ds, 2, 100);
  REQUIRE(rep.phi_small.size() == 2);
  CHECK(rep.phi_small[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rep.phi_small[1] == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(rep.phi_large[1] == doctest::Approx(1.5).epsilon(1e-10));
  CHECK(rep.c == doctest::Approx(0.5).epsilon(1e-10));
  CHECK_FALSE(rep.degenerate);
}

TEST_CASE("duplicate columns degrade the scan to a degenerate report") {
  const matrix h = helmert(3);
  matrix x(h.rows(), 2);
  for (std::size_t i = 0; i < h.rows(); ++i) {
    x(i, 0) = h(i, 0);
    x(i, 1) = h(i, 0);
  }
  std::vector<double> y(h.rows(), 0.0);
  const dataset ds = wrap_prestandardized(x, y, false);
  const eigen_report rep = restricted_eigen_scan(ds, 2, 100);
  CHECK(rep.degenerate);
  CHECK(rep.c == doctest::Approx(1.0));
}

TEST_CASE("a tight budget switches large sizes to sampling") {
  const dataset ds = standardize(random_design(40, 25, 5), std::vector<double>(40, 0.0), false);
  const eigen_report rep = restricted_eigen_scan(ds, 4, 50, 7);
  REQUIRE(rep.size_exhaustive.size() == 4);
  CHECK(rep.size_exhaustive[0] == 1); // 25 subsets of size 1
  CHECK(rep.size_exhaustive[2] == 0); // C(25,3) = 2300 > 50
  CHECK_FALSE(rep.exhaustive);
  // sampled bounds still bracket a sane spectrum
  CHECK(rep.phi_small[3] > 0.0);
  CHECK(rep.phi_small[3] <= rep.phi_small[0] + 1e-12);
  CHECK(rep.phi_large[3] >= rep.phi_large[0] - 1e-12);
  CHECK(rep.c >= 0.0);
  CHECK(rep.c < 1.0);

  // deterministic in the seed
  const eigen_report rep2 = restricted_eigen_scan(ds, 4, 50, 7);
  CHECK(rep2.phi_small == rep.phi_small);
  CHECK(rep2.phi_large == rep.phi_large);
}

TEST_CASE("pga_dataset wraps standardized designs exactly and standardizes raw ones") {
  const matrix h = helmert(4);
  std::vector<double> beta{2.0, -1.0, 0.0, 0.0};
  const dataset exact = pga_dataset(beta, h);
  CHECK(exact.has_truth());
  CHECK(exact.true_beta[0] == 2.0);
  CHECK(exact.true_beta[1] == -1.0);
  for (std::size_t i = 0; i < h.rows(); ++i)
    CHECK(exact.x(i, 2) == h(i, 2)); // untouched columns

  const matrix raw = random_design(30, 4, 9);
  const dataset std_ds = pga_dataset(beta, raw);
  CHECK(std_ds.has_truth());
  // noiseless: y equals X beta in the standardized basis up to centering
  std::vector<double> fit(30, 0.0);
  for (std::size_t j = 0; j < 4; ++j)
    for (std::size_t i = 0; i < 30; ++i) fit[i] += std_ds.true_beta[j] * std_ds.x(i, j);
  for (std::size_t i = 0; i < 30; ++i) CHECK(std_ds.y[i] == doctest::Approx(fit[i]).epsilon(1e-10));
}

TEST_CASE("pure greedy on an orthonormal design recovers the support in s steps") {
  const matrix h = helmert(8);
  std::vector<double> beta(8, 0.0);
  beta[0] = 3.0;
  beta[1] = 2.0;
  beta[2] = 1.0;
  const boost_path path = run_pga(beta, h, 30);
  CHECK(path.models() == 3);
  CHECK(path.stop_reason == "zero-residual");
  CHECK(path.selection_order == std::vector<long>{0, 1, 2});
  // noiseless: ||V^m|| == ||U^m|| along the whole path
  for (long t = 0; t <= path.models(); ++t)
    CHECK(path.pred_sq_at(t) == doctest::Approx(path.residual_sq_at(t)).epsilon(1e-12));
}

TEST_CASE("bound checks hold along an exhaustively scanned noiseless path") {
  const matrix raw = random_design(25, 8, 33);
  std::vector<double> beta(8, 0.0);
  beta[1] = 1.5;
  beta[4] = -1.0;
  beta[6] = 0.5;
  const dataset ds = pga_dataset(beta, raw);
  const boost_path path = run_pga(beta, raw, 25);
  const eigen_report rep = restricted_eigen_scan(ds, 6, 400);

  const auto reports = check_bounds(ds, path, rep);
  REQUIRE(reports.size() >= 4);
  bool saw_ratio = false, saw_floor = false, saw_noise = false;
  for (const auto& r : reports) {
    if (r.name == "step-ratio") {
      saw_ratio = true;
      CHECK_FALSE(r.violated);
      CHECK(r.tolerance == 1e-8);
    }
    if (r.name == "revisit-floor-finite") {
      saw_floor = true;
      CHECK_FALSE(r.violated);
    }
    if (r.name == "noise-envelope") saw_noise = true;
  }
  CHECK(saw_ratio);
  CHECK(saw_floor);
  CHECK_FALSE(saw_noise); // noiseless run: the envelope has nothing to say

  // every step-ratio record obeys observed <= limit within tolerance
  for (const auto& r : reports)
    if (r.name == "step-ratio")
      for (const auto& st : r.steps) CHECK(st.observed <= st.limit + 1e-8);
}

TEST_CASE("csv writers for theory artifacts emit well-formed tables") {
  const matrix h = helmert(3);
  std::vector<double> y(h.rows(), 0.0);
  const dataset ds = wrap_prestandardized(h, y, false);
  const eigen_report rep = restricted_eigen_scan(ds, 2, 10);
  const std::string dir = std::filesystem::temp_directory_path().string();
  const std::string epath = dir + "/l2b_eigen_test.csv";
  write_eigen_csv(rep, epath);
  std::ifstream f(epath);
  std::string header;
  std::getline(f, header);
  CHECK(header.find("phi_small") != std::string::npos);
  std::remove(epath.c_str());
}

TEST_SUITE_END();
