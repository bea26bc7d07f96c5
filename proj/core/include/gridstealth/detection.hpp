#pragma once

#include <cstdint>
#include <vector>

#include "gridstealth/attack.hpp"
#include "gridstealth/covariance.hpp"
#include "gridstealth/observation_model.hpp"

namespace gridstealth {

enum class Hypothesis { clean, attacked };

/// Log-likelihood-ratio detector between N(0, Sigma_YA) (attacked) and
/// N(0, Sigma_YY) (clean). It decides "attack" when log L(y) >= log_tau.
class LrtDetector {
 public:
  LrtDetector(CovarianceMatrix clean, CovarianceMatrix attacked, double log_tau = 0.0);

  static LrtDetector for_attack(const ObservationModel& model, const AttackCovariance& attack,
                                double log_tau = 0.0);

  /// log f_A(y) - log f_Y(y).
  double log_lrt(const Eigen::VectorXd& y) const;
  /// One statistic per column of y; factorisations are shared.
  Eigen::VectorXd log_lrt_columns(const Eigen::MatrixXd& y) const;

  bool decides_attack(double statistic) const noexcept { return statistic >= log_tau_; }

  LrtDetector with_threshold(double log_tau) const;

  double log_tau() const noexcept { return log_tau_; }
  Eigen::Index dim() const noexcept { return clean_.dim(); }
  const CovarianceMatrix& clean() const noexcept { return clean_; }
  const CovarianceMatrix& attacked() const noexcept { return attacked_; }

 private:
  CovarianceMatrix clean_;
  CovarianceMatrix attacked_;
  Eigen::LLT<Eigen::MatrixXd> clean_llt_;
  Eigen::LLT<Eigen::MatrixXd> attacked_llt_;
  double log_det_ratio_;  // log|Sigma_YY| - log|Sigma_YA|
  double log_tau_;
  // Generalised eigenvalues of (Sigma_YA, Sigma_YY). In the eigenbasis the
  // statistic is 1/2 sum_i (1 - 1/lambda_i) u_i^2 - 1/2 sum_i ln lambda_i.
  Eigen::VectorXd spectrum_;

  friend std::vector<double> lrt_statistics(const LrtDetector&, Hypothesis, std::size_t,
                                            std::uint64_t, std::size_t);
};

/// Monte Carlo draws of the log-LRT under one hypothesis, each summed over a
/// block of `block_size` i.i.d. vectors. Draws are made in the generalised
/// eigenbasis of the two covariances, where the statistic of one vector is a
/// weighted sum of M independent squared normals; this has exactly the law of
/// log_lrt(y) with y drawn from the hypothesis. Blocks are generated in chunks
/// of 512 whose streams are seeded with derive_seed(seed, chunk), so the result
/// does not depend on the number of threads.
std::vector<double> lrt_statistics(const LrtDetector& detector, Hypothesis hypothesis,
                                   std::size_t n_blocks, std::uint64_t seed,
                                   std::size_t block_size = 1);

/// log_tau = empirical (1 - alpha) quantile (order statistic floor((1-alpha) n))
/// of the log-LRT under clean data, so the false-alarm rate is about alpha.
double calibrate_threshold(const LrtDetector& detector, double alpha_target, std::size_t n_mc,
                           std::uint64_t seed);

struct DetectionReport {
  double alpha_hat = 0.0;     // false alarms on clean data
  double beta_hat = 0.0;      // missed detections on attacked data
  std::size_t n_mc = 0;
  double exponent_hat = 0.0;  // -ln(beta_hat); NaN when beta_hat == 0
};

struct ErrorRates {
  double alpha = 0.0;
  double beta = 0.0;
};

/// Error rates of a threshold applied to cached statistics.
ErrorRates error_rates_from_statistics(const std::vector<double>& clean_stats,
                                       const std::vector<double>& attacked_stats, double log_tau);

/// Clean draws use derive_seed(seed, 0), attacked draws derive_seed(seed, 1).
DetectionReport empirical_error_rates(const LrtDetector& detector, std::size_t n_mc,
                                      std::uint64_t seed);

/// Which hypothesis carries the fixed level-alpha error in the block test.
enum class SteinOrientation {
  /// The attacked distribution is the null (H0 of the hypothesis pair): at most
  /// alpha of attacked blocks are missed and the false-alarm rate on clean
  /// blocks decays like exp(-n D(P_YA || P_Y)).
  attacked_null,
  /// Operational labelling: false alarms fixed at alpha on clean blocks, missed
  /// detections decay like exp(-n D(P_Y || P_YA)).
  clean_null,
};

struct SteinEstimate {
  double exponent_hat = 0.0;  // -(1/n) ln beta_hat
  double beta_hat = 0.0;
  double log_tau = 0.0;       // block threshold
  double divergence = 0.0;    // limiting exponent for the chosen orientation
  std::size_t block_size = 0;
};

/// Empirical error exponent of the block LRT with n vectors per decision.
/// Calibration draws use derive_seed(seed, 0); the decaying error is measured
/// on derive_seed(seed, 1). Throws insufficient_resolution when no decaying
/// errors are observed.
SteinEstimate stein_exponent(const ObservationModel& model, const AttackCovariance& attack,
                             std::size_t n_per_decision, double alpha, std::size_t n_mc,
                             std::uint64_t seed,
                             SteinOrientation orientation = SteinOrientation::attacked_null);

}  // namespace gridstealth
