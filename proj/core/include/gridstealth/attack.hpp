#pragma once

#include <cstdint>
#include <vector>

#include "gridstealth/covariance.hpp"
#include "gridstealth/observation_model.hpp"

namespace gridstealth {

struct AttackProvenance {
  enum class Kind { optimal, from_samples, custom };

  Kind kind = Kind::custom;
  Eigen::Index sample_count = 0;  // from_samples only
  std::uint64_t seed = 0;         // from_samples only
};

/// Covariance of a zero-mean Gaussian attack vector added to the measurements.
struct AttackCovariance {
  CovarianceMatrix sigma_aa;
  AttackProvenance provenance;

  static AttackCovariance custom(CovarianceMatrix sigma_aa) {
    return {std::move(sigma_aa), {}};
  }
  Eigen::Index dim() const noexcept { return sigma_aa.dim(); }
};

/// All values in nats.
struct UtilityBreakdown {
  double mutual_information = 0.0;  // I(X; Y_A)
  double kl_divergence = 0.0;       // D(P_{Y_A} || P_Y)
  double total = 0.0;               // D(P_{X Y_A} || P_X P_Y)
};

/// D(N(0, sigma0) || N(0, sigma1)) in nats. sigma1 must be positive definite;
/// a singular sigma0 gives +infinity.
double kl_gaussian(const CovarianceMatrix& sigma0, const CovarianceMatrix& sigma1);

/// The unique minimiser of the stealth utility: H sigma_xx H^T.
AttackCovariance optimal_attack(const ObservationModel& model);

/// 1/2 (log|Sigma_YY + Sigma_AA| - log|Sigma_AA + sigma^2 I|).
double mutual_information(const ObservationModel& model, const AttackCovariance& attack);

/// Mutual information plus detectability, each from its own formula.
UtilityBreakdown stealth_utility(const ObservationModel& model, const AttackCovariance& attack);

/// Independent route to the total:
/// 1/2 (log|Sigma_YY| - log|Sigma_AA + sigma^2 I| + tr(Sigma_YY^-1 Sigma_AA)).
double utility_closed_form(const ObservationModel& model, const AttackCovariance& attack);

/// Total utility of the optimal attack, 1/2 (M - sigma^2 tr(Sigma_YY^-1)).
double optimal_utility_closed_form(const ObservationModel& model);

/// tr(Sigma_YY^-1 Sigma_AA) - log|Sigma_AA + sigma^2 I|, the part of the
/// objective that depends on the attack.
double reduced_objective(const ObservationModel& model, const AttackCovariance& attack);

/// ||Sigma_YY^-1 - (Sigma_AA + sigma^2 I)^-1||_F. Zero exactly at the optimum.
double stationarity_residual(const ObservationModel& model, const AttackCovariance& attack);

/// H s_xx H^T: the attack an adversary builds from an estimated state
/// covariance.
AttackCovariance attack_from_samples(const ObservationModel& model, const CovarianceMatrix& s_xx,
                                     Eigen::Index sample_count = 0, std::uint64_t seed = 0);

struct ConditionalDivergence {
  double mean = 0.0;
  std::vector<double> per_trial;
};

/// Monte Carlo estimate of the utility conditioned on the training set: each
/// trial draws k state samples (seed derive_seed(seed, trial)), forms the
/// sample covariance, builds the attack from it and evaluates its utility.
/// Output order follows trial index regardless of scheduling.
ConditionalDivergence conditional_divergence_mc(const ObservationModel& model, Eigen::Index k,
                                                std::size_t trials, std::uint64_t seed);

/// ||reference - estimate||_F / ||reference||_F.
double normalized_frobenius_gap(const AttackCovariance& reference,
                                const AttackCovariance& estimate);

}  // namespace gridstealth
