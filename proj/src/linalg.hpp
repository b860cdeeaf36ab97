#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace l2boost {

// Dense column-major matrix. Columns are contiguous so componentwise scans
// touch one cache stream per regressor.
class matrix {
public:
  matrix() = default;
  matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[j * rows_ + i]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[j * rows_ + i]; }

  std::span<double> col(std::size_t j) { return {data_.data() + j * rows_, rows_}; }
  std::span<const double> col(std::size_t j) const { return {data_.data() + j * rows_, rows_}; }

  const std::vector<double>& data() const noexcept { return data_; }

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Empirical inner product <a,b>_n = (1/n) sum a_i b_i.
double inner_n(std::span<const double> a, std::span<const double> b);

// (1/n) sum a_i^2 and its square root.
double norm_sq_n(std::span<const double> a);
double norm_n(std::span<const double> a);

// Least squares of y on the given columns via the normal equations
// (1/n) X'X b = (1/n) X'y, Cholesky with a relative pivot guard.
std::vector<double> ols_solve(const matrix& x, std::span<const double> y);

// Lower Cholesky factor of a symmetric positive definite matrix.
// Pivot below 1e-12 times the largest pivot raises singular_gram.
matrix cholesky(const matrix& a);

// (min, max) eigenvalue of a symmetric matrix by cyclic Jacobi rotations.
std::pair<double, double> sym_eigen_range(const matrix& a);

// Grows a Cholesky factorization of an E_n-scale Gram one column at a time.
// Used by the orthogonal path and by support refits, where the selected set
// only ever grows; nothing is ever downdated.
class growing_cholesky {
public:
  explicit growing_cholesky(std::size_t n_rows) : n_(n_rows) {}

  std::size_t size() const noexcept { return cols_.size(); }

  // Appends a regressor column; returns false if the new pivot falls under
  // the relative guard (column numerically collinear with the current set).
  bool try_add(std::span<const double> column);

  // Solves (1/n) X'X b = (1/n) X'y for the current set.
  std::vector<double> solve(std::span<const double> y) const;

private:
  std::size_t n_;
  std::vector<std::span<const double>> cols_;
  std::vector<std::vector<double>> l_rows_; // lower-triangular rows of the factor
  double max_pivot_ = 0.0;
};

} // namespace l2boost
