// SPDX-License-Identifier: Apache-2.0
#include "tfphase/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace tfphase {

double global_phase_error(const Signal& estimate, const Signal& x) {
  if (estimate.size() != x.size()) throw std::invalid_argument("global_phase_error: length mismatch");
  // Evaluated at the optimal phase rather than through the expanded square,
  // which loses everything below sqrt(eps).
  const cdouble ip = inner(estimate, x);
  const cdouble phase = std::abs(ip) > 0.0 ? ip / std::abs(ip) : cdouble(1.0, 0.0);
  return (estimate - phase * x).norm();
}

OrderStatsReport order_statistics_experiment(const Lattice& lattice, double c, double K, double k, int trials,
                                             std::uint64_t seed, const std::optional<Signal>& x) {
  if (trials <= 0) throw std::invalid_argument("order statistics need at least one trial");
  const int M = lattice.dim();
  Rng signal_rng = make_rng(seed, Stream::kSignal);
  const Signal xs = x ? Signal(*x / x->norm()) : random_unit_signal(M, signal_rng);

  OrderStatsReport r;
  r.c = c;
  r.K = K;
  r.k = k;
  r.trials = trials;
  r.lattice_size = lattice.size();
  r.small_bound = c * c + k * c;
  r.large_bound = (8.0 / std::numbers::pi) * std::exp(-K * K) +
                  k * (2.0 * std::numbers::sqrt2 / std::sqrt(std::numbers::pi)) * std::exp(-K * K / 2.0);
  const double p = 1.0 / (k * k);
  r.allowed_violation = p + 3.0 * std::sqrt(p * (1.0 - p) / trials);

  const double lo = c / std::sqrt(static_cast<double>(M));
  const double hi = K / std::sqrt(static_cast<double>(M));
  const double n = static_cast<double>(lattice.size());
  std::size_t bad_small = 0;
  std::size_t bad_large = 0;
  double sum_small = 0.0;
  double sum_large = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    Rng rng = make_rng(seed, Stream::kWindow, static_cast<std::uint64_t>(trial));
    const GaborFrame frame(sample_window_uniform_sphere(M, rng), lattice);
    const Eigen::VectorXd mags = stft_coefficients(xs, frame).cwiseAbs();
    const auto small = static_cast<double>((mags.array() < lo).count());
    const auto large = static_cast<double>((mags.array() > hi).count());
    sum_small += small / n;
    sum_large += large / n;
    if (small > n * r.small_bound) ++bad_small;
    if (large > n * r.large_bound) ++bad_large;
  }
  r.mean_fraction_small = sum_small / trials;
  r.mean_fraction_large = sum_large / trials;
  r.violation_small = static_cast<double>(bad_small) / trials;
  r.violation_large = static_cast<double>(bad_large) / trials;
  return r;
}

UniformScanReport uniform_bound_scan(int M, double c, int signals, std::uint64_t seed) {
  UniformScanReport r;
  r.M = M;
  r.c = c;
  r.signals = signals;
  const double logm = std::log(static_cast<double>(M));
  r.threshold = std::sqrt(3.0 / (2.0 * c)) * logm * logm / std::sqrt(static_cast<double>(M));
  r.count_bound = c * M / std::pow(logm, 4);

  Rng wrng = make_rng(seed, Stream::kWindow);
  Signal g(M);
  const double scale = std::pow(static_cast<double>(M), -0.25);
  for (int m = 0; m < M; ++m) g(m) = scale * complex_normal(wrng);
  const GaborFrame frame(g, Lattice::full(M));

  Rng xrng = make_rng(seed, Stream::kSignal);
  double total = 0.0;
  for (int s = 0; s < signals; ++s) {
    const Signal x = random_unit_signal(M, xrng);
    const auto count = static_cast<std::size_t>((stft_coefficients(x, frame).cwiseAbs().array() > r.threshold).count());
    r.max_count = std::max(r.max_count, count);
    total += static_cast<double>(count);
  }
  r.mean_count = signals > 0 ? total / signals : 0.0;
  return r;
}

namespace {

double lambda_min(const CMatrix& gram) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(gram, Eigen::EigenvaluesOnly);
  return std::max(es.eigenvalues()(0), 0.0);
}

CMatrix gram_of(const CMatrix& S, std::span<const std::size_t> cols) {
  CMatrix G = CMatrix::Zero(S.rows(), S.rows());
  for (std::size_t j : cols) G.noalias() += S.col(static_cast<Eigen::Index>(j)) * S.col(static_cast<Eigen::Index>(j)).adjoint();
  return G;
}

double binomial(std::size_t n, std::size_t k) {
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

double exhaustive_min(const CMatrix& S, std::size_t keep, std::size_t& evaluated) {
  const auto N = static_cast<std::size_t>(S.cols());
  std::vector<std::size_t> idx(keep);
  std::iota(idx.begin(), idx.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  while (true) {
    best = std::min(best, lambda_min(gram_of(S, idx)));
    ++evaluated;
    std::size_t i = keep;
    while (i > 0 && idx[i - 1] == N - keep + i - 1) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j < keep; ++j) idx[j] = idx[j - 1] + 1;
  }
  return best;
}

double random_min(const CMatrix& S, std::size_t keep, std::size_t budget, Rng& rng, std::size_t& evaluated) {
  std::vector<std::size_t> all(static_cast<std::size_t>(S.cols()));
  std::iota(all.begin(), all.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t b = 0; b < budget; ++b) {
    std::shuffle(all.begin(), all.end(), rng);
    best = std::min(best, lambda_min(gram_of(S, std::span<const std::size_t>(all.data(), keep))));
    ++evaluated;
  }
  return best;
}

double greedy_min(const CMatrix& S, std::size_t keep, std::size_t& evaluated) {
  std::vector<std::size_t> cols(static_cast<std::size_t>(S.cols()));
  std::iota(cols.begin(), cols.end(), 0);
  CMatrix G = gram_of(S, cols);
  double current = lambda_min(G);
  while (cols.size() > keep) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_pos = 0;
    for (std::size_t p = 0; p < cols.size(); ++p) {
      const auto col = S.col(static_cast<Eigen::Index>(cols[p]));
      const double v = lambda_min(G - col * col.adjoint());
      ++evaluated;
      if (v < best) {
        best = v;
        best_pos = p;
      }
    }
    const auto col = S.col(static_cast<Eigen::Index>(cols[best_pos]));
    G -= col * col.adjoint();
    cols.erase(cols.begin() + static_cast<std::ptrdiff_t>(best_pos));
    current = best;
  }
  return current;
}

}  // namespace

DeltaEstimate delta_estimate(const CMatrix& synthesis, double fraction, DeltaStrategy strategy, std::size_t budget,
                             Rng& rng) {
  const auto N = static_cast<std::size_t>(synthesis.cols());
  const auto M = static_cast<std::size_t>(synthesis.rows());
  if (!(fraction > 0.0 && fraction <= 1.0)) throw std::invalid_argument("delta fraction must lie in (0, 1]");
  DeltaEstimate out;
  out.keep = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(N) - 1e-9));
  if (out.keep < M) throw std::invalid_argument("delta: retained subsets smaller than the dimension");
  out.random_min = std::numeric_limits<double>::quiet_NaN();
  out.greedy_min = std::numeric_limits<double>::quiet_NaN();

  const bool small = binomial(N, out.keep) <= 1e5;
  if (strategy == DeltaStrategy::kExhaustive || (strategy == DeltaStrategy::kAuto && small)) {
    if (!small) throw std::invalid_argument("delta: exhaustive enumeration refused above 1e5 subsets");
    out.value = exhaustive_min(synthesis, out.keep, out.subsets_evaluated);
    out.exhaustive = true;
    return out;
  }
  const bool do_random = strategy != DeltaStrategy::kGreedy;
  const bool do_greedy = strategy != DeltaStrategy::kRandom;
  out.value = std::numeric_limits<double>::infinity();
  if (do_random) {
    out.random_min = random_min(synthesis, out.keep, budget, rng, out.subsets_evaluated);
    out.value = std::min(out.value, out.random_min);
  }
  if (do_greedy) {
    out.greedy_min = greedy_min(synthesis, out.keep, out.subsets_evaluated);
    out.value = std::min(out.value, out.greedy_min);
  }
  return out;
}

}  // namespace tfphase
