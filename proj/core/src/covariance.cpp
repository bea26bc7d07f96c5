#include "gridstealth/covariance.hpp"

#include <cmath>

#include "gridstealth/error.hpp"
#include "linalg.hpp"

namespace gridstealth {

CovarianceMatrix CovarianceMatrix::from(Eigen::MatrixXd entries) {
  if (entries.rows() != entries.cols()) {
    throw Error(ErrorKind::shape_error, "covariance must be square");
  }
  if (entries.size() > 0 && !entries.allFinite()) {
    throw Error(ErrorKind::not_psd, "non-finite covariance entry");
  }
  if (entries.rows() > 0 &&
      (entries - entries.transpose()).cwiseAbs().maxCoeff() > kSymmetryTolerance) {
    throw Error(ErrorKind::not_symmetric, "asymmetry exceeds 1e-10");
  }
  entries = detail::symmetrized(entries);
  if (entries.rows() == 0) return CovarianceMatrix(std::move(entries));

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(entries);
  const Eigen::VectorXd& values = eig.eigenvalues();
  const double scale = values.cwiseAbs().maxCoeff();
  const double smallest = values.minCoeff();
  if (smallest < -kPsdRelativeTolerance * scale) {
    throw Error(ErrorKind::not_psd, "smallest eigenvalue " + std::to_string(smallest));
  }
  if (smallest < 0.0) {
    const Eigen::VectorXd clamped = values.cwiseMax(0.0);
    entries = detail::symmetrized(eig.eigenvectors() * clamped.asDiagonal() *
                                  eig.eigenvectors().transpose());
  }
  return CovarianceMatrix(std::move(entries));
}

CovarianceMatrix CovarianceMatrix::zero(Eigen::Index dim) {
  return CovarianceMatrix(Eigen::MatrixXd::Zero(dim, dim));
}

CovarianceMatrix CovarianceMatrix::identity(Eigen::Index dim) {
  return CovarianceMatrix(Eigen::MatrixXd::Identity(dim, dim));
}

CovarianceMatrix toeplitz_covariance(Eigen::Index n, double rho) {
  if (!(rho >= 0.0 && rho < 1.0)) {
    throw Error(ErrorKind::invalid_correlation, "rho must lie in [0, 1)");
  }
  if (n < 1) throw Error(ErrorKind::shape_error, "dimension must be positive");
  Eigen::MatrixXd s(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto lag = static_cast<double>(i > j ? i - j : j - i);
      s(i, j) = lag == 0.0 ? 1.0 : std::pow(rho, lag);
    }
  }
  return CovarianceMatrix::from(std::move(s));
}

GaussianSampler::GaussianSampler(const CovarianceMatrix& cov) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov.matrix());
  const Eigen::VectorXd scales = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  root_ = detail::symmetrized(eig.eigenvectors() * scales.asDiagonal() *
                              eig.eigenvectors().transpose());
}

Eigen::VectorXd GaussianSampler::draw(GaussianStream& stream) const {
  Eigen::VectorXd z(dim());
  for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = stream.next();
  return root_ * z;
}

Eigen::MatrixXd GaussianSampler::draw_columns(GaussianStream& stream, Eigen::Index count) const {
  Eigen::MatrixXd z(dim(), count);
  for (Eigen::Index j = 0; j < count; ++j) {
    for (Eigen::Index i = 0; i < z.rows(); ++i) z(i, j) = stream.next();
  }
  return root_ * z;
}

StateSampleSet sample_gaussian(const CovarianceMatrix& cov, Eigen::Index k, std::uint64_t seed) {
  if (k < 1) throw Error(ErrorKind::insufficient_samples, "k must be positive");
  GaussianStream stream(seed);
  const GaussianSampler sampler(cov);
  StateSampleSet out;
  out.samples = sampler.draw_columns(stream, k).transpose();
  return out;
}

CovarianceMatrix sample_covariance(const StateSampleSet& samples) {
  const auto k = samples.count();
  if (k < 2) throw Error(ErrorKind::insufficient_samples, "need K >= 2");
  Eigen::MatrixXd s(samples.dim(), samples.dim());
  s.setZero();
  s.selfadjointView<Eigen::Lower>().rankUpdate(samples.samples.transpose(),
                                               1.0 / static_cast<double>(k - 1));
  s.triangularView<Eigen::StrictlyUpper>() = s.transpose();
  return CovarianceMatrix::from(std::move(s));
}

}  // namespace gridstealth
