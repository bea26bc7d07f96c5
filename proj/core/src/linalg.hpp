#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "gridstealth/error.hpp"

namespace gridstealth::detail {

inline Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& a) { return 0.5 * (a + a.transpose()); }

inline Eigen::LLT<Eigen::MatrixXd> cholesky(const Eigen::MatrixXd& a, const char* what) {
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorKind::not_positive_definite, what);
  }
  return llt;
}

inline double log_det(const Eigen::LLT<Eigen::MatrixXd>& llt) {
  const auto& l = llt.matrixLLT();
  double sum = 0.0;
  for (Eigen::Index i = 0; i < l.rows(); ++i) sum += std::log(l(i, i));
  return 2.0 * sum;
}

inline void require_square(const Eigen::MatrixXd& a, Eigen::Index dim, const char* what) {
  if (a.rows() != dim || a.cols() != dim) throw Error(ErrorKind::shape_error, what);
}

}  // namespace gridstealth::detail
