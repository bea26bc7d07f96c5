#pragma once

#include <Eigen/Dense>
#include <optional>

#include "gridstealth/covariance.hpp"
#include "gridstealth/jacobian.hpp"

namespace gridstealth {

/// Linear Gaussian measurement model y = H x + z with x ~ N(0, sigma_xx) and
/// z ~ N(0, sigma_sq I). Immutable; derived covariances are computed once.
class ObservationModel {
 public:
  ObservationModel(Eigen::MatrixXd h, CovarianceMatrix sigma_xx, double sigma_sq);
  ObservationModel(const Jacobian& h, CovarianceMatrix sigma_xx, double sigma_sq)
      : ObservationModel(h.matrix, std::move(sigma_xx), sigma_sq) {}

  const Eigen::MatrixXd& h() const noexcept { return h_; }
  const CovarianceMatrix& sigma_xx() const noexcept { return sigma_xx_; }
  double sigma_sq() const noexcept { return sigma_sq_; }
  Eigen::Index measurements() const noexcept { return h_.rows(); }
  Eigen::Index states() const noexcept { return h_.cols(); }

  /// H sigma_xx H^T.
  const CovarianceMatrix& signal_covariance() const noexcept { return signal_; }
  /// Sigma_YY = H sigma_xx H^T + sigma_sq I.
  const CovarianceMatrix& clean_covariance() const noexcept { return clean_; }
  const Eigen::LLT<Eigen::MatrixXd>& clean_factor() const noexcept { return clean_llt_; }

 private:
  Eigen::MatrixXd h_;
  CovarianceMatrix sigma_xx_;
  double sigma_sq_;
  CovarianceMatrix signal_;
  CovarianceMatrix clean_;
  Eigen::LLT<Eigen::MatrixXd> clean_llt_;
};

/// H S H^T for an arbitrary N x N PSD matrix S.
CovarianceMatrix project_to_measurements(const Eigen::MatrixXd& h, const CovarianceMatrix& s);

/// Sigma_YY without an attack, Sigma_YY + sigma_aa with one.
CovarianceMatrix measurement_covariance(const ObservationModel& model,
                                        const std::optional<CovarianceMatrix>& sigma_aa);

/// 10 log10(tr(H sigma_xx H^T) / (M sigma_sq)).
double snr_db(const ObservationModel& model);

/// Noise variance that places the model at `snr` decibels.
double noise_variance_for_snr(const Eigen::MatrixXd& h, const CovarianceMatrix& sigma_xx,
                              double snr);
inline double noise_variance_for_snr(const Jacobian& h, const CovarianceMatrix& sigma_xx,
                                     double snr) {
  return noise_variance_for_snr(h.matrix, sigma_xx, snr);
}

}  // namespace gridstealth
