#include "linalg.hpp"

#include "errors.hpp"

#include <cmath>
#include <cstdio>

namespace l2boost {

namespace {

constexpr double kPivotGuard = 1e-12;

std::string index_msg(const char* what, std::size_t a, std::size_t b) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%s (%zu vs %zu)", what, a, b);
  return buf;
}

} // namespace

double inner_n(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) fail(errc::length_mismatch, index_msg("inner_n length mismatch", a.size(), b.size()));
  if (a.empty()) fail(errc::invalid_argument, "inner_n on empty vectors");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s / static_cast<double>(a.size());
}

double norm_sq_n(std::span<const double> a) { return inner_n(a, a); }

double norm_n(std::span<const double> a) { return std::sqrt(norm_sq_n(a)); }

std::vector<double> ols_solve(const matrix& x, std::span<const double> y) {
  const std::size_t k = x.cols();
  if (k == 0) return {};
  if (x.rows() != y.size()) fail(errc::length_mismatch, index_msg("ols_solve row mismatch", x.rows(), y.size()));

  matrix gram(k, k);
  std::vector<double> rhs(k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const double g = inner_n(x.col(i), x.col(j));
      gram(i, j) = g;
      gram(j, i) = g;
    }
    rhs[i] = inner_n(x.col(i), y);
  }

  matrix l = cholesky(gram);

  // forward then back substitution
  std::vector<double> z(k);
  for (std::size_t i = 0; i < k; ++i) {
    double s = rhs[i];
    for (std::size_t j = 0; j < i; ++j) s -= l(i, j) * z[j];
    z[i] = s / l(i, i);
  }
  std::vector<double> beta(k);
  for (std::size_t ii = k; ii-- > 0;) {
    double s = z[ii];
    for (std::size_t j = ii + 1; j < k; ++j) s -= l(j, ii) * beta[j];
    beta[ii] = s / l(ii, ii);
  }
  return beta;
}

matrix cholesky(const matrix& a) {
  const std::size_t k = a.rows();
  if (k != a.cols()) fail(errc::invalid_argument, "cholesky needs a square matrix");
  matrix l(k, k);
  double max_pivot = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double s = a(i, j);
      for (std::size_t m = 0; m < j; ++m) s -= l(i, m) * l(j, m);
      if (i == j) {
        if (s > max_pivot) max_pivot = s;
        if (!(s > 0.0) || s < kPivotGuard * max_pivot)
          fail(errc::singular_gram, "cholesky pivot under relative guard");
        l(i, i) = std::sqrt(s);
      } else {
        l(i, j) = s / l(j, j);
      }
    }
  }
  return l;
}

std::pair<double, double> sym_eigen_range(const matrix& a) {
  const std::size_t k = a.rows();
  if (k != a.cols()) fail(errc::invalid_argument, "sym_eigen_range needs a square matrix");
  if (k == 0) fail(errc::invalid_argument, "sym_eigen_range on empty matrix");

  double max_abs = 0.0;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) max_abs = std::max(max_abs, std::abs(a(i, j)));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j)
      if (std::abs(a(i, j) - a(j, i)) > 1e-10 * std::max(1.0, max_abs))
        fail(errc::not_symmetric, "sym_eigen_range: matrix is not symmetric");
  if (max_abs == 0.0) return {0.0, 0.0};

  matrix w = a;
  // symmetrize so rotations see one consistent value
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) {
      const double v = 0.5 * (w(i, j) + w(j, i));
      w(i, j) = v;
      w(j, i) = v;
    }

  double fro = 0.0;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) fro += w(i, j) * w(i, j);
  fro = std::sqrt(fro);

  const double target = 1e-12 * fro;
  const int max_sweeps = 100;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i + 1; j < k; ++j) off += 2.0 * w(i, j) * w(i, j);
    if (std::sqrt(off) <= target) break;
    if (sweep == max_sweeps - 1) fail(errc::no_convergence, "jacobi sweep limit reached");

    for (std::size_t p = 0; p + 1 < k; ++p) {
      for (std::size_t q = p + 1; q < k; ++q) {
        const double apq = w(p, q);
        if (apq == 0.0) continue;
        const double tau = (w(q, q) - w(p, p)) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (std::size_t i = 0; i < k; ++i) {
          const double wip = w(i, p);
          const double wiq = w(i, q);
          w(i, p) = c * wip - s * wiq;
          w(i, q) = s * wip + c * wiq;
        }
        for (std::size_t i = 0; i < k; ++i) {
          const double wpi = w(p, i);
          const double wqi = w(q, i);
          w(p, i) = c * wpi - s * wqi;
          w(q, i) = s * wpi + c * wqi;
        }
      }
    }
  }

  double lo = w(0, 0);
  double hi = w(0, 0);
  for (std::size_t i = 1; i < k; ++i) {
    lo = std::min(lo, w(i, i));
    hi = std::max(hi, w(i, i));
  }
  return {lo, hi};
}

bool growing_cholesky::try_add(std::span<const double> column) {
  if (column.size() != n_) fail(errc::length_mismatch, index_msg("growing_cholesky column size", column.size(), n_));
  const std::size_t k = cols_.size();
  std::vector<double> row(k + 1);
  std::vector<double> g(k + 1);
  for (std::size_t i = 0; i < k; ++i) g[i] = inner_n(column, cols_[i]);
  g[k] = norm_sq_n(column);

  for (std::size_t i = 0; i < k; ++i) {
    double s = g[i];
    for (std::size_t j = 0; j < i; ++j) s -= row[j] * l_rows_[i][j];
    row[i] = s / l_rows_[i][i];
  }
  double d = g[k];
  for (std::size_t j = 0; j < k; ++j) d -= row[j] * row[j];
  const double pivot_floor = kPivotGuard * std::max(max_pivot_, g[k]);
  if (!(d > 0.0) || d < pivot_floor) return false;

  row[k] = std::sqrt(d);
  max_pivot_ = std::max(max_pivot_, d);
  l_rows_.push_back(std::move(row));
  cols_.push_back(column);
  return true;
}

std::vector<double> growing_cholesky::solve(std::span<const double> y) const {
  const std::size_t k = cols_.size();
  std::vector<double> z(k);
  for (std::size_t i = 0; i < k; ++i) {
    double s = inner_n(cols_[i], y);
    for (std::size_t j = 0; j < i; ++j) s -= l_rows_[i][j] * z[j];
    z[i] = s / l_rows_[i][i];
  }
  std::vector<double> beta(k);
  for (std::size_t ii = k; ii-- > 0;) {
    double s = z[ii];
    for (std::size_t j = ii + 1; j < k; ++j) s -= l_rows_[j][ii] * beta[j];
    beta[ii] = s / l_rows_[ii][ii];
  }
  return beta;
}

} // namespace l2boost
