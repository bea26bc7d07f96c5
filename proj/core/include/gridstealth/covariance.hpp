#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "gridstealth/random.hpp"

namespace gridstealth {

/// Symmetric positive semi-definite matrix.
///
/// Construction checks symmetry to 1e-10 (absolute) and requires the smallest
/// eigenvalue to be at least -1e-9 * ||A||_2. Round-off negatives inside that
/// band are clamped to zero by rebuilding the matrix from its eigenpairs.
class CovarianceMatrix {
 public:
  static constexpr double kSymmetryTolerance = 1e-10;
  static constexpr double kPsdRelativeTolerance = 1e-9;

  CovarianceMatrix() = default;

  static CovarianceMatrix from(Eigen::MatrixXd entries);
  static CovarianceMatrix zero(Eigen::Index dim);
  static CovarianceMatrix identity(Eigen::Index dim);

  Eigen::Index dim() const noexcept { return entries_.rows(); }
  const Eigen::MatrixXd& matrix() const noexcept { return entries_; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return entries_(i, j); }

 private:
  explicit CovarianceMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {}

  Eigen::MatrixXd entries_;
};

/// s_ij = rho^|i-j|, 0 <= rho < 1.
CovarianceMatrix toeplitz_covariance(Eigen::Index n, double rho);

/// K draws of an N-dimensional state, one per row.
struct StateSampleSet {
  Eigen::MatrixXd samples;

  Eigen::Index count() const noexcept { return samples.rows(); }
  Eigen::Index dim() const noexcept { return samples.cols(); }
};

/// Zero-mean Gaussian sampler using the symmetric square root of the
/// covariance, so singular covariances are fine.
class GaussianSampler {
 public:
  explicit GaussianSampler(const CovarianceMatrix& cov);

  Eigen::Index dim() const noexcept { return root_.rows(); }
  const Eigen::MatrixXd& root() const noexcept { return root_; }

  /// Fills the standard-normal vector coordinate by coordinate, then maps it.
  Eigen::VectorXd draw(GaussianStream& stream) const;

  /// Column-wise draws: column j is the j-th vector produced by draw().
  Eigen::MatrixXd draw_columns(GaussianStream& stream, Eigen::Index count) const;

 private:
  Eigen::MatrixXd root_;
};

StateSampleSet sample_gaussian(const CovarianceMatrix& cov, Eigen::Index k, std::uint64_t seed);

/// S = (1 / (K - 1)) * sum_i x_i x_i^T. No mean is subtracted: the prior is
/// zero-mean.
CovarianceMatrix sample_covariance(const StateSampleSet& samples);

}  // namespace gridstealth
