// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstddef>
#include <numbers>

#include <Eigen/Dense>

namespace tfphase {

using cdouble = std::complex<double>;

/// Complex signal on Z_M. Index arithmetic on signals is always modulo M.
using Signal = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RMatrix = Eigen::MatrixXd;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// e^{2 pi i t / 3}, the cube root of unity mixing the three edge measurements.
inline cdouble cube_root(int t) {
  return std::polar(1.0, kTwoPi * static_cast<double>(((t % 3) + 3) % 3) / 3.0);
}

inline int wrap(long long v, int M) {
  long long r = v % M;
  return static_cast<int>(r < 0 ? r + M : r);
}

}  // namespace tfphase
