// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <vector>

#include "tfphase/types.hpp"

namespace tfphase {

/// Matrices up to this order are diagonalized densely; larger ones go to Lanczos.
inline constexpr Eigen::Index kDenseEigenLimit = 4096;

template <typename Scalar>
struct ExtremalEigenpair {
  double value = 0.0;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> vector;
  double residual = 0.0;
  int iterations = 0;
};

/// Largest eigenpair of a Hermitian operator restricted to the orthogonal
/// complement of `deflate` (orthonormal columns). Lanczos with full
/// reorthogonalization; stops when the Ritz residual drops below `tol`.
ExtremalEigenpair<double> lanczos_largest(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& apply,
                                          Eigen::Index n, const Eigen::MatrixXd& deflate, double tol = 1e-8,
                                          int max_iter = 600);

ExtremalEigenpair<cdouble> lanczos_largest(
    const std::function<Eigen::VectorXcd(const Eigen::VectorXcd&)>& apply, Eigen::Index n,
    const Eigen::MatrixXcd& deflate, double tol = 1e-8, int max_iter = 600);

}  // namespace tfphase
