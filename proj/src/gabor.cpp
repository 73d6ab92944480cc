// SPDX-License-Identifier: Apache-2.0
#include "tfphase/gabor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>

#include "tfphase/fft.hpp"

namespace tfphase {

Lattice::Lattice(std::vector<int> shifts, int M) : shifts_(std::move(shifts)), M_(M) {
  if (M_ < 2) throw std::invalid_argument("lattice dimension must be at least 2");
  if (shifts_.empty()) throw std::invalid_argument("lattice needs at least one time shift");
  std::set<int> seen;
  for (int k : shifts_) {
    if (k < 0 || k >= M_) throw std::invalid_argument("time shift " + std::to_string(k) + " outside Z_M");
    if (!seen.insert(k).second) throw std::invalid_argument("duplicate time shift " + std::to_string(k));
  }
}

Lattice Lattice::evenly_spaced(int M, int K) {
  if (K < 1 || K > M) throw std::invalid_argument("number of time shifts must lie in [1, M]");
  std::vector<int> shifts(static_cast<std::size_t>(K));
  for (int i = 0; i < K; ++i) shifts[static_cast<std::size_t>(i)] = static_cast<int>((static_cast<long long>(i) * M) / K);
  return Lattice(std::move(shifts), M);
}

GaborFrame::GaborFrame(Signal window, Lattice lattice) : window_(std::move(window)), lattice_(std::move(lattice)) {
  if (window_.size() != lattice_.dim()) throw std::invalid_argument("window length does not match lattice dimension");
  if (window_.norm() == 0.0) throw std::invalid_argument("Gabor window must be nonzero");
}

Signal GaborFrame::vector(std::size_t index) const { return time_freq_shift(window_, lattice_.at(index)); }

CMatrix GaborFrame::synthesis() const {
  CMatrix S(dim(), static_cast<Eigen::Index>(size()));
  for (std::size_t j = 0; j < size(); ++j) S.col(static_cast<Eigen::Index>(j)) = vector(j);
  return S;
}

CMatrix GaborFrame::synthesis(std::span<const std::size_t> subset) const {
  CMatrix S(dim(), static_cast<Eigen::Index>(subset.size()));
  for (std::size_t j = 0; j < subset.size(); ++j) S.col(static_cast<Eigen::Index>(j)) = vector(subset[j]);
  return S;
}

Signal translate(const Signal& x, int k) {
  const int M = static_cast<int>(x.size());
  Signal y(M);
  for (int m = 0; m < M; ++m) y(m) = x(wrap(static_cast<long long>(m) - k, M));
  return y;
}

Signal modulate(const Signal& x, int l) {
  const int M = static_cast<int>(x.size());
  Signal y(M);
  const int lr = wrap(l, M);
  for (int m = 0; m < M; ++m) {
    // Reduce l*m mod M before forming the angle so large products stay exact.
    const int phase = static_cast<int>((static_cast<long long>(lr) * m) % M);
    y(m) = std::polar(1.0, kTwoPi * phase / M) * x(m);
  }
  return y;
}

Signal time_freq_shift(const Signal& g, TimeFreqIndex lambda) { return modulate(translate(g, lambda.k), lambda.l); }

Signal dft(const Signal& x) {
  Signal y = x;
  fft::forward({y.data(), static_cast<std::size_t>(y.size())});
  return y;
}

Signal idft(const Signal& x) {
  Signal y = x;
  fft::backward({y.data(), static_cast<std::size_t>(y.size())});
  return y / static_cast<double>(y.size());
}

cdouble inner(const Signal& u, const Signal& v) { return v.dot(u); }  // Eigen's dot conjugates its left operand

Eigen::VectorXcd stft_coefficients(const Signal& x, const GaborFrame& frame) {
  const int M = frame.dim();
  if (x.size() != M) throw std::invalid_argument("signal length does not match frame dimension");
  const Lattice& lat = frame.lattice();
  const Signal& g = frame.window();
  Eigen::VectorXcd out(static_cast<Eigen::Index>(lat.size()));
  const int K = lat.num_shifts();

#pragma omp parallel for schedule(static)
  for (int p = 0; p < K; ++p) {
    const int k = lat.shifts()[static_cast<std::size_t>(p)];
    cdouble* block = out.data() + static_cast<std::ptrdiff_t>(lat.index_of(p, 0));
    for (int m = 0; m < M; ++m) block[m] = x(m) * std::conj(g(wrap(static_cast<long long>(m) - k, M)));
    fft::forward({block, static_cast<std::size_t>(M)});
  }
  return out;
}

Signal sample_window_uniform_sphere(int M, Rng& rng) {
  if (M < 2) throw std::invalid_argument("window length must be at least 2");
  constexpr int kMaxDraws = 64;
  for (int attempt = 0; attempt < kMaxDraws; ++attempt) {
    Signal h(M);
    for (int m = 0; m < M; ++m) h(m) = complex_normal(rng);
    const double norm = h.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) continue;
    Signal g = h / norm;
    if (g.cwiseAbs().minCoeff() < 1e-12) continue;
    return g;
  }
  throw std::runtime_error("window sampling failed: repeated degenerate draws");
}

RankDeficientError::RankDeficientError(Eigen::Index rank, Eigen::Index needed)
    : std::runtime_error("rank-deficient subframe: rank " + std::to_string(rank) + " < dimension " +
                         std::to_string(needed)),
      rank_(rank) {}

Signal least_squares_reconstruct(const GaborFrame& frame, std::span<const std::size_t> subset,
                                 const Eigen::VectorXcd& coefficients) {
  const int M = frame.dim();
  if (coefficients.size() != static_cast<Eigen::Index>(subset.size()))
    throw std::invalid_argument("coefficient count does not match subset size");
  if (subset.size() < static_cast<std::size_t>(M))
    throw RankDeficientError(static_cast<Eigen::Index>(subset.size()), M);

  const CMatrix analysis = frame.synthesis(subset).adjoint();
  Eigen::ColPivHouseholderQR<CMatrix> qr(analysis);
  // Relative rank threshold: columns of the analysis matrix are unit-norm multiples of g.
  qr.setThreshold(1e-12);
  if (qr.rank() < M) throw RankDeficientError(qr.rank(), M);
  return qr.solve(coefficients);
}

double analysis_sigma_min(const GaborFrame& frame, std::span<const std::size_t> subset) {
  const CMatrix analysis = frame.synthesis(subset).adjoint();
  Eigen::BDCSVD<CMatrix> svd(analysis);
  const auto& s = svd.singularValues();
  if (s.size() < frame.dim()) return 0.0;
  return s(frame.dim() - 1);
}

namespace {

double binomial(std::size_t n, std::size_t k) {
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

}  // namespace

bool full_spark_check(const GaborFrame& frame) {
  const auto M = static_cast<std::size_t>(frame.dim());
  const std::size_t N = frame.size();
  if (N < M) throw std::invalid_argument("full spark needs at least M frame vectors");
  if (binomial(N, M) > 1e6) throw std::invalid_argument("full spark check refused: more than 1e6 subsets");

  const CMatrix S = frame.synthesis();
  const Eigen::VectorXd norms = S.colwise().norm().transpose();
  std::vector<std::size_t> idx(M);
  std::iota(idx.begin(), idx.end(), 0);
  CMatrix sub(static_cast<Eigen::Index>(M), static_cast<Eigen::Index>(M));
  while (true) {
    double scale = 1.0;
    for (std::size_t j = 0; j < M; ++j) {
      sub.col(static_cast<Eigen::Index>(j)) = S.col(static_cast<Eigen::Index>(idx[j]));
      scale *= norms(static_cast<Eigen::Index>(idx[j]));
    }
    if (std::abs(sub.partialPivLu().determinant()) <= 1e-10 * scale) return false;

    // Next combination in lexicographic order.
    std::size_t i = M;
    while (i > 0 && idx[i - 1] == N - M + i - 1) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j < M; ++j) idx[j] = idx[j - 1] + 1;
  }
  return true;
}

}  // namespace tfphase
