#pragma once

#include "linalg.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace l2boost {

// Design matrix with columns standardized to mean 0, E_n variance 1, plus the
// bookkeeping needed to map coefficients back to the raw basis. When the data
// are synthetic, true_beta holds the generating coefficients expressed in the
// standardized basis (beta_j * scale_j), so predictions and prediction-error
// norms live in one consistent basis.
struct dataset {
  matrix x;
  std::vector<double> y; // centered by y_center when center_y was requested
  std::vector<std::string> names;
  std::vector<double> true_beta; // empty when unknown
  std::vector<double> means;
  std::vector<double> scales;
  double y_center = 0.0;

  std::size_t n() const noexcept { return x.rows(); }
  std::size_t p() const noexcept { return x.cols(); }
  bool has_truth() const noexcept { return !true_beta.empty(); }
};

// Standardizes every column of raw_x (constant columns are an error) and
// optionally centers y.
dataset standardize(const matrix& raw_x, std::vector<double> y, bool center_y);

// Applies previously fitted means/scales/y_center, for holdout rows.
dataset standardize_with(const matrix& raw_x, std::vector<double> y, const std::vector<double>& means,
                         const std::vector<double>& scales, double y_center);

// Wraps columns that are already standardized (validated to 1e-6); used for
// exactly orthonormal designs where re-scaling would perturb the structure.
dataset wrap_prestandardized(matrix x, std::vector<double> y, bool center_y);

// Loads a CSV, peels off the response column (empty name means "no response,
// use zeros"), standardizes, and optionally holds out a random row fraction
// standardized with the training statistics.
dataset dataset_from_csv(const std::string& path, const std::string& response, bool center_y);
std::pair<dataset, dataset> dataset_from_csv_split(const std::string& path, const std::string& response,
                                                   bool center_y, double test_fraction, std::uint64_t seed);

// Fitted values X beta + y_center (raw response units).
std::vector<double> predict(const dataset& ds, std::span<const double> beta);

} // namespace l2boost
