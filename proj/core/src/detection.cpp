#include "gridstealth/detection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "gridstealth/error.hpp"
#include "linalg.hpp"
#include "parallel.hpp"

namespace gridstealth {
namespace {

constexpr std::size_t kBlocksPerChunk = 512;
constexpr double kUnitEigenTolerance = 1e-12;

void require_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 0.5)) {
    throw Error(ErrorKind::invalid_alpha, "alpha must lie in (0, 0.5)");
  }
}

double order_statistic(std::vector<double> values, double fraction) {
  const auto n = values.size();
  auto index = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n)));
  index = std::min(index, n - 1);
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(index),
                   values.end());
  return values[index];
}

}  // namespace

LrtDetector::LrtDetector(CovarianceMatrix clean, CovarianceMatrix attacked, double log_tau)
    : clean_(std::move(clean)), attacked_(std::move(attacked)), log_tau_(log_tau) {
  if (clean_.dim() != attacked_.dim()) {
    throw Error(ErrorKind::shape_error, "detector covariances differ in size");
  }
  clean_llt_ = detail::cholesky(clean_.matrix(), "clean covariance");
  attacked_llt_ = detail::cholesky(attacked_.matrix(), "attacked covariance");
  log_det_ratio_ = detail::log_det(clean_llt_) - detail::log_det(attacked_llt_);

  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> eig(
      attacked_.matrix(), clean_.matrix(), Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
  if (eig.info() != Eigen::Success) {
    throw Error(ErrorKind::not_positive_definite, "generalised eigenproblem failed");
  }
  spectrum_ = eig.eigenvalues();
  for (auto& lambda : spectrum_) {
    if (std::abs(lambda - 1.0) < kUnitEigenTolerance) lambda = 1.0;
  }
}

LrtDetector LrtDetector::for_attack(const ObservationModel& model,
                                    const AttackCovariance& attack, double log_tau) {
  return LrtDetector(model.clean_covariance(), measurement_covariance(model, attack.sigma_aa),
                     log_tau);
}

LrtDetector LrtDetector::with_threshold(double log_tau) const {
  LrtDetector copy = *this;
  copy.log_tau_ = log_tau;
  return copy;
}

double LrtDetector::log_lrt(const Eigen::VectorXd& y) const {
  if (y.size() != dim()) throw Error(ErrorKind::shape_error, "measurement vector length");
  const double clean_form = clean_llt_.matrixL().solve(y).squaredNorm();
  const double attacked_form = attacked_llt_.matrixL().solve(y).squaredNorm();
  return 0.5 * (clean_form - attacked_form + log_det_ratio_);
}

Eigen::VectorXd LrtDetector::log_lrt_columns(const Eigen::MatrixXd& y) const {
  if (y.rows() != dim()) throw Error(ErrorKind::shape_error, "measurement matrix rows");
  const Eigen::MatrixXd clean_white = clean_llt_.matrixL().solve(y);
  const Eigen::MatrixXd attacked_white = attacked_llt_.matrixL().solve(y);
  const Eigen::VectorXd forms = clean_white.colwise().squaredNorm().transpose() -
                                attacked_white.colwise().squaredNorm().transpose();
  return 0.5 * (forms.array() + log_det_ratio_).matrix();
}

std::vector<double> lrt_statistics(const LrtDetector& detector, Hypothesis hypothesis,
                                   std::size_t n_blocks, std::uint64_t seed,
                                   std::size_t block_size) {
  if (block_size < 1) throw Error(ErrorKind::shape_error, "block size must be positive");
  const Eigen::ArrayXd lambda = detector.spectrum_.array();
  const bool attacked = hypothesis == Hypothesis::attacked;
  // u_i ~ N(0, 1) under clean data and N(0, lambda_i) under attack
  const Eigen::ArrayXd weight =
      0.5 * (1.0 - lambda.inverse()) * (attacked ? lambda : Eigen::ArrayXd::Ones(lambda.size()));
  const double offset = -0.5 * lambda.log().sum() * static_cast<double>(block_size);
  const auto m = lambda.size();

  std::vector<double> stats(n_blocks, 0.0);
  const std::size_t chunks = (n_blocks + kBlocksPerChunk - 1) / kBlocksPerChunk;
  detail::parallel_for(chunks, [&](std::size_t chunk) {
    GaussianStream stream(derive_seed(seed, chunk));
    const std::size_t first = chunk * kBlocksPerChunk;
    const std::size_t last = std::min(n_blocks, first + kBlocksPerChunk);
    for (std::size_t b = first; b < last; ++b) {
      double sum = 0.0;
      for (std::size_t v = 0; v < block_size; ++v) {
        for (Eigen::Index i = 0; i < m; ++i) {
          const double u = stream.next();
          sum += weight[i] * u * u;
        }
      }
      stats[b] = sum + offset;
    }
  });
  return stats;
}

double calibrate_threshold(const LrtDetector& detector, double alpha_target, std::size_t n_mc,
                           std::uint64_t seed) {
  require_alpha(alpha_target);
  if (n_mc < 1000) throw Error(ErrorKind::insufficient_samples, "calibration needs n_mc >= 1000");
  return order_statistic(lrt_statistics(detector, Hypothesis::clean, n_mc, seed),
                         1.0 - alpha_target);
}

ErrorRates error_rates_from_statistics(const std::vector<double>& clean_stats,
                                       const std::vector<double>& attacked_stats,
                                       double log_tau) {
  ErrorRates rates;
  if (!clean_stats.empty()) {
    const auto alarms = std::count_if(clean_stats.begin(), clean_stats.end(),
                                      [&](double s) { return s >= log_tau; });
    rates.alpha = static_cast<double>(alarms) / static_cast<double>(clean_stats.size());
  }
  if (!attacked_stats.empty()) {
    const auto misses = std::count_if(attacked_stats.begin(), attacked_stats.end(),
                                      [&](double s) { return s < log_tau; });
    rates.beta = static_cast<double>(misses) / static_cast<double>(attacked_stats.size());
  }
  return rates;
}

DetectionReport empirical_error_rates(const LrtDetector& detector, std::size_t n_mc,
                                      std::uint64_t seed) {
  const auto clean = lrt_statistics(detector, Hypothesis::clean, n_mc, derive_seed(seed, 0));
  const auto attacked =
      lrt_statistics(detector, Hypothesis::attacked, n_mc, derive_seed(seed, 1));
  const auto rates = error_rates_from_statistics(clean, attacked, detector.log_tau());
  DetectionReport report;
  report.alpha_hat = rates.alpha;
  report.beta_hat = rates.beta;
  report.n_mc = n_mc;
  report.exponent_hat =
      rates.beta > 0.0 ? -std::log(rates.beta) : std::numeric_limits<double>::quiet_NaN();
  return report;
}

SteinEstimate stein_exponent(const ObservationModel& model, const AttackCovariance& attack,
                             std::size_t n_per_decision, double alpha, std::size_t n_mc,
                             std::uint64_t seed, SteinOrientation orientation) {
  require_alpha(alpha);
  if (n_per_decision < 1) throw Error(ErrorKind::shape_error, "block size must be positive");
  if (n_mc < 1) throw Error(ErrorKind::insufficient_samples, "n_mc must be positive");

  const auto detector = LrtDetector::for_attack(model, attack);
  const bool attacked_null = orientation == SteinOrientation::attacked_null;

  SteinEstimate out;
  out.block_size = n_per_decision;
  out.divergence = attacked_null ? kl_gaussian(detector.attacked(), detector.clean())
                                 : kl_gaussian(detector.clean(), detector.attacked());

  const auto null_stats =
      lrt_statistics(detector, attacked_null ? Hypothesis::attacked : Hypothesis::clean, n_mc,
                     derive_seed(seed, 0), n_per_decision);
  const auto other_stats =
      lrt_statistics(detector, attacked_null ? Hypothesis::clean : Hypothesis::attacked, n_mc,
                     derive_seed(seed, 1), n_per_decision);

  std::size_t errors = 0;
  if (attacked_null) {
    // at most alpha of attacked blocks fall below the threshold
    out.log_tau = order_statistic(null_stats, alpha);
    errors = static_cast<std::size_t>(std::count_if(
        other_stats.begin(), other_stats.end(), [&](double s) { return s >= out.log_tau; }));
  } else {
    out.log_tau = order_statistic(null_stats, 1.0 - alpha);
    errors = static_cast<std::size_t>(std::count_if(
        other_stats.begin(), other_stats.end(), [&](double s) { return s < out.log_tau; }));
  }

  if (errors == 0) {
    const double needed = 10.0 * std::exp(static_cast<double>(n_per_decision) * out.divergence);
    std::ostringstream msg;
    msg << "no errors in " << n_mc << " blocks of " << n_per_decision
        << "; roughly n_mc >= " << needed << " needed";
    throw Error(ErrorKind::insufficient_resolution, msg.str());
  }
  out.beta_hat = static_cast<double>(errors) / static_cast<double>(n_mc);
  out.exponent_hat = -std::log(out.beta_hat) / static_cast<double>(n_per_decision);
  return out;
}

}  // namespace gridstealth
