#include "gridstealth/observation_model.hpp"

#include <cmath>

#include "gridstealth/error.hpp"
#include "linalg.hpp"

namespace gridstealth {

CovarianceMatrix project_to_measurements(const Eigen::MatrixXd& h, const CovarianceMatrix& s) {
  if (s.dim() != h.cols()) throw Error(ErrorKind::shape_error, "state covariance vs H columns");
  const Eigen::MatrixXd hs = h * s.matrix();
  return CovarianceMatrix::from(detail::symmetrized(hs * h.transpose()));
}

ObservationModel::ObservationModel(Eigen::MatrixXd h, CovarianceMatrix sigma_xx, double sigma_sq)
    : h_(std::move(h)), sigma_xx_(std::move(sigma_xx)), sigma_sq_(sigma_sq) {
  if (!(sigma_sq_ > 0.0) || !std::isfinite(sigma_sq_)) {
    throw Error(ErrorKind::shape_error, "noise variance must be positive and finite");
  }
  if (h_.rows() < 1 || h_.cols() < 1) throw Error(ErrorKind::shape_error, "empty H");
  if (sigma_xx_.dim() != h_.cols()) {
    throw Error(ErrorKind::shape_error, "sigma_xx must be N x N");
  }
  signal_ = project_to_measurements(h_, sigma_xx_);
  Eigen::MatrixXd clean = signal_.matrix();
  clean.diagonal().array() += sigma_sq_;
  clean_ = CovarianceMatrix::from(std::move(clean));
  clean_llt_ = detail::cholesky(clean_.matrix(), "measurement covariance");
}

CovarianceMatrix measurement_covariance(const ObservationModel& model,
                                        const std::optional<CovarianceMatrix>& sigma_aa) {
  if (!sigma_aa) return model.clean_covariance();
  if (sigma_aa->dim() != model.measurements()) {
    throw Error(ErrorKind::shape_error, "attack covariance must be M x M");
  }
  return CovarianceMatrix::from(model.clean_covariance().matrix() + sigma_aa->matrix());
}

double snr_db(const ObservationModel& model) {
  const double signal = model.signal_covariance().matrix().trace();
  return 10.0 * std::log10(signal /
                           (static_cast<double>(model.measurements()) * model.sigma_sq()));
}

double noise_variance_for_snr(const Eigen::MatrixXd& h, const CovarianceMatrix& sigma_xx,
                              double snr) {
  if (sigma_xx.dim() != h.cols()) throw Error(ErrorKind::shape_error, "sigma_xx vs H");
  // tr(H S H^T) = sum of (H S) .* H
  const double signal = (h * sigma_xx.matrix()).cwiseProduct(h).sum();
  if (!(signal > 0.0)) throw Error(ErrorKind::degenerate_signal, "tr(H sigma_xx H^T) is zero");
  return signal / (static_cast<double>(h.rows()) * std::pow(10.0, snr / 10.0));
}

}  // namespace gridstealth
