// Reference implementations used only by tests. Each one follows a different
// computational route from the library code it checks: dense explicit
// inverses and determinants, direct quadrature, plain loops, and the standard
// library's own normal generator.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <vector>

#include "gridstealth/case_file.hpp"

namespace oracle {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Normal sequence written straight from the documented RNG recipe.
inline std::vector<double> documented_normals(std::uint64_t seed, std::size_t count) {
  std::mt19937_64 engine(seed);
  std::vector<double> out;
  while (out.size() < count) {
    const double u1 = (static_cast<double>(engine() >> 11) + 0.5) * 0x1.0p-53;
    const double u2 = (static_cast<double>(engine() >> 11) + 0.5) * 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    out.push_back(r * std::cos(2.0 * std::numbers::pi * u2));
    out.push_back(r * std::sin(2.0 * std::numbers::pi * u2));
  }
  out.resize(count);
  return out;
}

/// Full DC susceptance matrix over all buses (bus order of the case).
inline Eigen::MatrixXd full_susceptance(const gridstealth::CaseFile& c) {
  const auto n = static_cast<Eigen::Index>(c.buses.size());
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, n);
  for (const auto& br : c.branches) {
    if (!br.in_service) continue;
    const auto f = static_cast<Eigen::Index>(*c.bus_position(br.from_bus));
    const auto t = static_cast<Eigen::Index>(*c.bus_position(br.to_bus));
    const double y = 1.0 / br.reactance;
    b(f, f) += y;
    b(t, t) += y;
    b(f, t) -= y;
    b(t, f) -= y;
  }
  return b;
}

/// Injection rows from B, then from-end flow rows, all bus columns kept.
inline Eigen::MatrixXd full_jacobian(const gridstealth::CaseFile& c) {
  const Eigen::MatrixXd b = full_susceptance(c);
  const auto n = b.rows();
  std::vector<Eigen::RowVectorXd> rows;
  for (Eigen::Index i = 0; i < n; ++i) rows.push_back(b.row(i));
  for (const auto& br : c.branches) {
    if (!br.in_service) continue;
    Eigen::RowVectorXd r = Eigen::RowVectorXd::Zero(n);
    r(static_cast<Eigen::Index>(*c.bus_position(br.from_bus))) = 1.0 / br.reactance;
    r(static_cast<Eigen::Index>(*c.bus_position(br.to_bus))) = -1.0 / br.reactance;
    rows.push_back(r);
  }
  Eigen::MatrixXd h(static_cast<Eigen::Index>(rows.size()), n);
  for (std::size_t i = 0; i < rows.size(); ++i) h.row(static_cast<Eigen::Index>(i)) = rows[i];
  return h;
}

/// Gaussian KL with explicit inverse and determinants.
inline double kl_dense(const Eigen::MatrixXd& s0, const Eigen::MatrixXd& s1) {
  const double m = static_cast<double>(s0.rows());
  return 0.5 * (std::log(s1.determinant() / s0.determinant()) - m + (s1.inverse() * s0).trace());
}

/// Scalar KL D(N(0,v0) || N(0,v1)) by composite Simpson quadrature of
/// p0 log(p0 / p1).
inline double kl_scalar_quadrature(double v0, double v1, int panels = 20000) {
  const double half_width = 14.0 * std::sqrt(std::max(v0, v1));
  auto log_density = [](double x, double v) {
    return -0.5 * x * x / v - 0.5 * std::log(2.0 * std::numbers::pi * v);
  };
  auto integrand = [&](double x) {
    const double log_p0 = log_density(x, v0);
    return std::exp(log_p0) * (log_p0 - log_density(x, v1));
  };
  const double h = 2.0 * half_width / panels;
  double sum = integrand(-half_width) + integrand(half_width);
  for (int i = 1; i < panels; ++i) {
    sum += integrand(-half_width + i * h) * (i % 2 ? 4.0 : 2.0);
  }
  return sum * h / 3.0;
}

struct MonteCarloValue {
  double mean = 0.0;
  double standard_error = 0.0;
};

/// I(X; Y_A) for the scalar model Y_A = h X + Z + A, estimated as the sample
/// mean of log f(y | x) - log f(y) with std::normal_distribution draws.
inline MonteCarloValue scalar_mi_monte_carlo(double h, double sxx, double noise, double attack,
                                             std::size_t n, std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  std::normal_distribution<double> normal;
  const double cond_var = noise + attack;
  const double marg_var = h * h * sxx + noise + attack;
  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = std::sqrt(sxx) * normal(engine);
    const double y = h * x + std::sqrt(cond_var) * normal(engine);
    const double r = y - h * x;
    const double v = 0.5 * (std::log(marg_var / cond_var) - r * r / cond_var + y * y / marg_var);
    sum += v;
    sum_sq += v * v;
  }
  const double mean = sum / static_cast<double>(n);
  const double var = sum_sq / static_cast<double>(n) - mean * mean;
  return {mean, std::sqrt(var / static_cast<double>(n))};
}

/// log f_A(y) - log f_Y(y) from explicit Gaussian densities.
inline double log_density_ratio(const Eigen::VectorXd& y, const Eigen::MatrixXd& clean,
                                const Eigen::MatrixXd& attacked) {
  auto log_density = [&](const Eigen::MatrixXd& s) {
    const double m = static_cast<double>(y.size());
    return -0.5 * (m * std::log(2.0 * std::numbers::pi) + std::log(s.determinant()) +
                   y.dot(s.inverse() * y));
  };
  return log_density(attacked) - log_density(clean);
}

/// Derivative of tr(S^-1 A) - log|A + s I| written with the diagonal-corrected
/// symmetric-matrix convention: 2 S^-1 - diag(S^-1) - 2 W^-1 + diag(W^-1),
/// W = A + s I.
inline Eigen::MatrixXd literal_stationarity_gradient(const Eigen::MatrixXd& sigma_yy,
                                                     const Eigen::MatrixXd& sigma_aa,
                                                     double noise) {
  const auto m = sigma_yy.rows();
  const Eigen::MatrixXd s_inv = sigma_yy.inverse();
  const Eigen::MatrixXd w_inv =
      (sigma_aa + noise * Eigen::MatrixXd::Identity(m, m)).inverse();
  return 2.0 * s_inv - Eigen::MatrixXd(s_inv.diagonal().asDiagonal()) - 2.0 * w_inv +
         Eigen::MatrixXd(w_inv.diagonal().asDiagonal());
}

/// (1 / (K - 1)) sum_i x_i x_i^T with plain loops.
inline Eigen::MatrixXd sample_covariance_loops(const Eigen::MatrixXd& rows) {
  const auto k = rows.rows();
  const auto n = rows.cols();
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index r = 0; r < k; ++r) {
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) s(i, j) += rows(r, i) * rows(r, j);
    }
  }
  return s / static_cast<double>(k - 1);
}

/// Random connected grid: a random spanning tree plus `extra` chords.
inline gridstealth::CaseFile random_grid(int n_bus, int extra, std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  std::uniform_real_distribution<double> reactance(0.05, 0.8);
  gridstealth::CaseFile c;
  const int slack = static_cast<int>(engine() % static_cast<std::uint64_t>(n_bus)) + 1;
  for (int i = 1; i <= n_bus; ++i) {
    c.buses.push_back({i, i == slack ? gridstealth::BusRole::slack : gridstealth::BusRole::pq});
  }
  for (int i = 2; i <= n_bus; ++i) {
    const int parent = static_cast<int>(engine() % static_cast<std::uint64_t>(i - 1)) + 1;
    if (engine() % 2) {
      c.branches.push_back({parent, i, reactance(engine), true});
    } else {
      c.branches.push_back({i, parent, reactance(engine), true});
    }
  }
  for (int e = 0; e < extra; ++e) {
    const int f = static_cast<int>(engine() % static_cast<std::uint64_t>(n_bus)) + 1;
    int t = static_cast<int>(engine() % static_cast<std::uint64_t>(n_bus)) + 1;
    if (t == f) t = f % n_bus + 1;
    c.branches.push_back({f, t, reactance(engine), engine() % 5 != 0});
  }
  return c;
}

/// Random symmetric positive definite matrix with eigenvalues in [lo, hi].
inline Eigen::MatrixXd random_spd(Eigen::Index n, double lo, double hi, std::mt19937_64& engine) {
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> eig(lo, hi);
  Eigen::MatrixXd g(n, n);
  for (Eigen::Index i = 0; i < g.size(); ++i) g.data()[i] = normal(engine);
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  const Eigen::MatrixXd q = qr.householderQ();
  Eigen::VectorXd d(n);
  for (Eigen::Index i = 0; i < n; ++i) d(i) = eig(engine);
  Eigen::MatrixXd s = q * d.asDiagonal() * q.transpose();
  return 0.5 * (s + s.transpose());
}

/// Random PSD matrix of the given rank, scaled to Frobenius norm `norm`.
inline Eigen::MatrixXd random_psd(Eigen::Index n, Eigen::Index rank, double norm,
                                  std::mt19937_64& engine) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd b(n, rank);
  for (Eigen::Index i = 0; i < b.size(); ++i) b.data()[i] = normal(engine);
  Eigen::MatrixXd s = b * b.transpose();
  s = 0.5 * (s + s.transpose());
  return s * (norm / s.norm());
}

}  // namespace oracle
