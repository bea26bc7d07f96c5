#include "gridstealth/attack.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "gridstealth/error.hpp"
#include "linalg.hpp"
#include "parallel.hpp"

namespace gridstealth {
namespace {

void require_attack_shape(const ObservationModel& model, const AttackCovariance& attack) {
  if (attack.dim() != model.measurements()) {
    throw Error(ErrorKind::shape_error, "attack covariance must be M x M");
  }
}

// Sigma_AA + sigma^2 I, positive definite for any PSD attack.
Eigen::LLT<Eigen::MatrixXd> noisy_attack_factor(const ObservationModel& model,
                                                const AttackCovariance& attack) {
  Eigen::MatrixXd a = attack.sigma_aa.matrix();
  a.diagonal().array() += model.sigma_sq();
  return detail::cholesky(a, "attack plus noise covariance");
}

}  // namespace

double kl_gaussian(const CovarianceMatrix& sigma0, const CovarianceMatrix& sigma1) {
  if (sigma0.dim() != sigma1.dim()) throw Error(ErrorKind::shape_error, "KL arguments differ in size");
  const auto m = static_cast<double>(sigma0.dim());
  const auto llt1 = detail::cholesky(sigma1.matrix(), "second KL argument");
  if (sigma0.matrix() == sigma1.matrix()) return 0.0;
  Eigen::LLT<Eigen::MatrixXd> llt0(sigma0.matrix());
  if (llt0.info() != Eigen::Success) return std::numeric_limits<double>::infinity();
  const double trace = llt1.solve(sigma0.matrix()).trace();
  const double value = 0.5 * (detail::log_det(llt1) - detail::log_det(llt0) - m + trace);
  return std::max(0.0, value);
}

AttackCovariance optimal_attack(const ObservationModel& model) {
  return {model.signal_covariance(), {AttackProvenance::Kind::optimal, 0, 0}};
}

double mutual_information(const ObservationModel& model, const AttackCovariance& attack) {
  require_attack_shape(model, attack);
  const auto attacked = measurement_covariance(model, attack.sigma_aa);
  const auto llt_attacked = detail::cholesky(attacked.matrix(), "attacked measurement covariance");
  const auto llt_noise = noisy_attack_factor(model, attack);
  return std::max(0.0, 0.5 * (detail::log_det(llt_attacked) - detail::log_det(llt_noise)));
}

UtilityBreakdown stealth_utility(const ObservationModel& model, const AttackCovariance& attack) {
  require_attack_shape(model, attack);
  UtilityBreakdown out;
  out.mutual_information = mutual_information(model, attack);
  out.kl_divergence =
      kl_gaussian(measurement_covariance(model, attack.sigma_aa), model.clean_covariance());
  out.total = out.mutual_information + out.kl_divergence;
  return out;
}

double utility_closed_form(const ObservationModel& model, const AttackCovariance& attack) {
  require_attack_shape(model, attack);
  return 0.5 * (reduced_objective(model, attack) + detail::log_det(model.clean_factor()));
}

double optimal_utility_closed_form(const ObservationModel& model) {
  const auto m = model.measurements();
  const double trace_inverse =
      model.clean_factor().solve(Eigen::MatrixXd::Identity(m, m)).trace();
  return 0.5 * (static_cast<double>(m) - model.sigma_sq() * trace_inverse);
}

double reduced_objective(const ObservationModel& model, const AttackCovariance& attack) {
  require_attack_shape(model, attack);
  const double trace = model.clean_factor().solve(attack.sigma_aa.matrix()).trace();
  return trace - detail::log_det(noisy_attack_factor(model, attack));
}

double stationarity_residual(const ObservationModel& model, const AttackCovariance& attack) {
  require_attack_shape(model, attack);
  const auto m = model.measurements();
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(m, m);
  const Eigen::MatrixXd clean_inverse = model.clean_factor().solve(eye);
  const Eigen::MatrixXd noisy_inverse = noisy_attack_factor(model, attack).solve(eye);
  return (clean_inverse - noisy_inverse).norm();
}

AttackCovariance attack_from_samples(const ObservationModel& model, const CovarianceMatrix& s_xx,
                                     Eigen::Index sample_count, std::uint64_t seed) {
  if (s_xx.dim() != model.states()) throw Error(ErrorKind::shape_error, "s_xx must be N x N");
  return {project_to_measurements(model.h(), s_xx),
          {AttackProvenance::Kind::from_samples, sample_count, seed}};
}

ConditionalDivergence conditional_divergence_mc(const ObservationModel& model, Eigen::Index k,
                                                std::size_t trials, std::uint64_t seed) {
  if (k < 2) throw Error(ErrorKind::insufficient_samples, "need K >= 2");
  if (k < model.states()) {
    throw Error(ErrorKind::insufficient_samples, "K must be at least the state dimension");
  }
  if (trials < 1) throw Error(ErrorKind::insufficient_samples, "need at least one trial");

  ConditionalDivergence out;
  out.per_trial.assign(trials, 0.0);
  detail::parallel_for(trials, [&](std::size_t t) {
    const auto trial_seed = derive_seed(seed, t);
    const auto samples = sample_gaussian(model.sigma_xx(), k, trial_seed);
    const auto attack = attack_from_samples(model, sample_covariance(samples), k, trial_seed);
    out.per_trial[t] = stealth_utility(model, attack).total;
  });
  out.mean = std::accumulate(out.per_trial.begin(), out.per_trial.end(), 0.0) /
             static_cast<double>(trials);
  return out;
}

double normalized_frobenius_gap(const AttackCovariance& reference,
                                const AttackCovariance& estimate) {
  if (reference.dim() != estimate.dim()) throw Error(ErrorKind::shape_error, "gap operands differ");
  const double scale = reference.sigma_aa.matrix().norm();
  if (!(scale > 0.0)) throw Error(ErrorKind::undefined_normalization, "reference is zero");
  return (reference.sigma_aa.matrix() - estimate.sigma_aa.matrix()).norm() / scale;
}

}  // namespace gridstealth
