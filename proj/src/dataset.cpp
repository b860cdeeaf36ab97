#include "dataset.hpp"

#include "csv.hpp"
#include "errors.hpp"
#include "rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

namespace l2boost {

namespace {

double mean_of(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

void check_xy(const matrix& raw_x, const std::vector<double>& y) {
  if (raw_x.rows() == 0 || raw_x.cols() == 0) fail(errc::invalid_argument, "empty design matrix");
  if (raw_x.rows() != y.size()) fail(errc::length_mismatch, "design and response row counts differ");
}

} // namespace

dataset standardize(const matrix& raw_x, std::vector<double> y, bool center_y) {
  check_xy(raw_x, y);
  const std::size_t n = raw_x.rows();
  const std::size_t p = raw_x.cols();

  dataset ds;
  ds.x = matrix(n, p);
  ds.means.resize(p);
  ds.scales.resize(p);
  for (std::size_t j = 0; j < p; ++j) {
    const auto col = raw_x.col(j);
    const double mu = mean_of(col);
    double var = 0.0;
    for (double v : col) var += (v - mu) * (v - mu);
    var /= static_cast<double>(n);
    if (var <= 1e-14 * std::max(1.0, mu * mu)) {
      char buf[96];
      std::snprintf(buf, sizeof buf, "column %zu is constant", j);
      fail(errc::constant_column, buf);
    }
    const double scale = std::sqrt(var);
    ds.means[j] = mu;
    ds.scales[j] = scale;
    auto out = ds.x.col(j);
    for (std::size_t i = 0; i < n; ++i) out[i] = (col[i] - mu) / scale;
  }

  if (center_y) {
    ds.y_center = mean_of(y);
    for (double& v : y) v -= ds.y_center;
  }
  ds.y = std::move(y);
  return ds;
}

dataset standardize_with(const matrix& raw_x, std::vector<double> y, const std::vector<double>& means,
                         const std::vector<double>& scales, double y_center) {
  check_xy(raw_x, y);
  const std::size_t n = raw_x.rows();
  const std::size_t p = raw_x.cols();
  if (means.size() != p || scales.size() != p) fail(errc::length_mismatch, "standardization stats length mismatch");

  dataset ds;
  ds.x = matrix(n, p);
  ds.means = means;
  ds.scales = scales;
  ds.y_center = y_center;
  for (std::size_t j = 0; j < p; ++j) {
    const auto col = raw_x.col(j);
    auto out = ds.x.col(j);
    for (std::size_t i = 0; i < n; ++i) out[i] = (col[i] - means[j]) / scales[j];
  }
  for (double& v : y) v -= y_center;
  ds.y = std::move(y);
  return ds;
}

dataset wrap_prestandardized(matrix x, std::vector<double> y, bool center_y) {
  check_xy(x, y);
  const std::size_t p = x.cols();
  for (std::size_t j = 0; j < p; ++j) {
    const auto col = x.col(j);
    const double mu = mean_of(col);
    const double msq = inner_n(col, col);
    if (std::abs(mu) > 1e-6 || std::abs(msq - 1.0) > 1e-6)
      fail(errc::invalid_argument, "columns are not standardized");
  }
  dataset ds;
  ds.means.assign(p, 0.0);
  ds.scales.assign(p, 1.0);
  ds.x = std::move(x);
  if (center_y) {
    ds.y_center = mean_of(y);
    for (double& v : y) v -= ds.y_center;
  }
  ds.y = std::move(y);
  return ds;
}

namespace {

struct raw_split {
  matrix x;
  std::vector<double> y;
  std::vector<std::string> names;
};

raw_split peel_response(const csv_table& table, const std::string& response) {
  const std::size_t n = table.values.rows();
  const std::size_t p_all = table.values.cols();

  std::size_t resp_idx = p_all;
  if (!response.empty()) {
    for (std::size_t j = 0; j < p_all; ++j)
      if (table.header[j] == response) {
        resp_idx = j;
        break;
      }
    if (resp_idx == p_all) fail(errc::missing_column, "no column named '" + response + "'");
    if (p_all < 2) fail(errc::invalid_argument, "no predictor columns besides the response");
  }

  raw_split out;
  const std::size_t p = response.empty() ? p_all : p_all - 1;
  out.x = matrix(n, p);
  std::size_t jj = 0;
  for (std::size_t j = 0; j < p_all; ++j) {
    if (j == resp_idx) continue;
    auto dst = out.x.col(jj);
    const auto src = table.values.col(j);
    std::copy(src.begin(), src.end(), dst.begin());
    out.names.push_back(table.header[j]);
    ++jj;
  }
  if (resp_idx < p_all) {
    const auto yc = table.values.col(resp_idx);
    out.y.assign(yc.begin(), yc.end());
  } else {
    out.y.assign(n, 0.0);
  }
  return out;
}

} // namespace

dataset dataset_from_csv(const std::string& path, const std::string& response, bool center_y) {
  auto table = read_csv(path);
  auto raw = peel_response(table, response);
  dataset ds = standardize(raw.x, std::move(raw.y), center_y);
  ds.names = std::move(raw.names);
  return ds;
}

std::pair<dataset, dataset> dataset_from_csv_split(const std::string& path, const std::string& response,
                                                   bool center_y, double test_fraction, std::uint64_t seed) {
  if (!(test_fraction > 0.0) || !(test_fraction < 1.0))
    fail(errc::invalid_argument, "test fraction must lie in (0, 1)");
  auto table = read_csv(path);
  auto raw = peel_response(table, response);
  const std::size_t n = raw.x.rows();
  const std::size_t n_test = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(test_fraction * n)));
  if (n_test >= n) fail(errc::invalid_argument, "test fraction leaves no training rows");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  rng_stream stream(seed, 0);
  for (std::size_t i = n; i-- > 1;) {
    const std::size_t k = static_cast<std::size_t>(stream.next_u64() % (i + 1));
    std::swap(order[i], order[k]);
  }

  const std::size_t p = raw.x.cols();
  auto take = [&](std::size_t from, std::size_t count) {
    matrix x(count, p);
    std::vector<double> y(count);
    for (std::size_t i = 0; i < count; ++i) {
      const std::size_t r = order[from + i];
      for (std::size_t j = 0; j < p; ++j) x(i, j) = raw.x(r, j);
      y[i] = raw.y[r];
    }
    return std::make_pair(std::move(x), std::move(y));
  };

  auto [x_test, y_test] = take(0, n_test);
  auto [x_train, y_train] = take(n_test, n - n_test);

  dataset train = standardize(x_train, std::move(y_train), center_y);
  train.names = raw.names;
  dataset test = standardize_with(x_test, std::move(y_test), train.means, train.scales, train.y_center);
  test.names = raw.names;
  return {std::move(train), std::move(test)};
}

std::vector<double> predict(const dataset& ds, std::span<const double> beta) {
  if (beta.size() != ds.p()) fail(errc::length_mismatch, "coefficient length differs from predictor count");
  std::vector<double> out(ds.n(), ds.y_center);
  for (std::size_t j = 0; j < ds.p(); ++j) {
    const double b = beta[j];
    if (b == 0.0) continue;
    const auto col = ds.x.col(j);
    for (std::size_t i = 0; i < ds.n(); ++i) out[i] += b * col[i];
  }
  return out;
}

} // namespace l2boost
