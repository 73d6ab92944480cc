// SPDX-License-Identifier: Apache-2.0
#include "tfphase/eigen_tools.hpp"

#include <cmath>
#include <random>

namespace tfphase {
namespace {

template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
Vec<Scalar> start_vector(Eigen::Index n) {
  std::mt19937_64 gen(0x1a2b3c4dULL);
  std::normal_distribution<double> nd;
  Vec<Scalar> v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if constexpr (std::is_same_v<Scalar, double>) {
      v(i) = nd(gen);
    } else {
      const double re = nd(gen);
      v(i) = Scalar(re, nd(gen));
    }
  }
  return v;
}

template <typename Scalar>
void project_out(Vec<Scalar>& w, const Mat<Scalar>& basis, Eigen::Index cols) {
  if (cols == 0) return;
  // Two passes of classical Gram-Schmidt.
  for (int pass = 0; pass < 2; ++pass) w -= basis.leftCols(cols) * (basis.leftCols(cols).adjoint() * w);
}

template <typename Scalar>
ExtremalEigenpair<Scalar> lanczos(const std::function<Vec<Scalar>(const Vec<Scalar>&)>& apply, Eigen::Index n,
                                  const Mat<Scalar>& deflate, double tol, int max_iter) {
  const Eigen::Index kmax = std::min<Eigen::Index>(max_iter, n - deflate.cols());
  if (kmax <= 0) throw std::invalid_argument("lanczos: nothing left after deflation");

  Mat<Scalar> Q(n, kmax);
  std::vector<double> alpha;
  std::vector<double> beta;

  Vec<Scalar> q = start_vector<Scalar>(n);
  project_out(q, deflate, deflate.cols());
  q.normalize();

  ExtremalEigenpair<Scalar> best;
  for (Eigen::Index j = 0; j < kmax; ++j) {
    Q.col(j) = q;
    Vec<Scalar> w = apply(q);
    alpha.push_back(std::real(q.dot(w)));
    project_out(w, deflate, deflate.cols());
    project_out(w, Q, j + 1);
    const double b = w.norm();

    const bool check = (j + 1) % 10 == 0 || j + 1 == kmax || b < 1e-14;
    if (check) {
      const Eigen::Index k = j + 1;
      Eigen::MatrixXd T = Eigen::MatrixXd::Zero(k, k);
      for (Eigen::Index i = 0; i < k; ++i) {
        T(i, i) = alpha[static_cast<std::size_t>(i)];
        if (i + 1 < k) T(i, i + 1) = T(i + 1, i) = beta[static_cast<std::size_t>(i)];
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
      const Eigen::VectorXd s = es.eigenvectors().col(k - 1);
      best.value = es.eigenvalues()(k - 1);
      best.residual = std::abs(b * s(k - 1));
      best.iterations = static_cast<int>(k);
      if (best.residual < tol || b < 1e-14 || k == kmax) {
        best.vector = Q.leftCols(k) * s.cast<Scalar>();
        best.vector.normalize();
        return best;
      }
    }
    beta.push_back(b);
    q = w / b;
  }
  return best;
}

}  // namespace

ExtremalEigenpair<double> lanczos_largest(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& apply,
                                          Eigen::Index n, const Eigen::MatrixXd& deflate, double tol, int max_iter) {
  return lanczos<double>(apply, n, deflate, tol, max_iter);
}

ExtremalEigenpair<cdouble> lanczos_largest(const std::function<Eigen::VectorXcd(const Eigen::VectorXcd&)>& apply,
                                           Eigen::Index n, const Eigen::MatrixXcd& deflate, double tol,
                                           int max_iter) {
  return lanczos<cdouble>(apply, n, deflate, tol, max_iter);
}

}  // namespace tfphase
