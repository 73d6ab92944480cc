// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>

#include "tfphase/gabor.hpp"

namespace tfphase {

/// min_theta |estimate - e^{i theta} x|_2, in closed form.
double global_phase_error(const Signal& estimate, const Signal& x);

/// Monte-Carlo check of the flatness bounds for the frame coefficients of a
/// fixed unit-norm x under a window redrawn uniformly from the sphere on
/// every trial.
struct OrderStatsReport {
  double c = 0.0;
  double K = 0.0;
  double k = 0.0;
  int trials = 0;
  std::size_t lattice_size = 0;
  double small_bound = 0.0;  // c^2 + k c
  double large_bound = 0.0;  // (8/pi) e^{-K^2} + k (2 sqrt 2 / sqrt pi) e^{-K^2/2}
  double mean_fraction_small = 0.0;  // mean fraction of |<x, pi(lambda) g>| < c / sqrt(M)
  double mean_fraction_large = 0.0;  // mean fraction of |<x, pi(lambda) g>| > K / sqrt(M)
  double violation_small = 0.0;      // fraction of trials with count > |Lambda| * small_bound
  double violation_large = 0.0;
  double allowed_violation = 0.0;    // 1/k^2 + 3 sqrt((1/k^2)(1 - 1/k^2) / trials)

  bool small_ok() const { return violation_small <= allowed_violation; }
  bool large_ok() const { return violation_large <= allowed_violation; }
};

OrderStatsReport order_statistics_experiment(const Lattice& lattice, double c, double K, double k, int trials,
                                             std::uint64_t seed, const std::optional<Signal>& x = std::nullopt);

/// Scan over random unit x of the number of full-lattice coefficients above
/// sqrt(3/(2c)) log^2 M / sqrt M, for one Gaussian window with E|g(m)|^2 = 1/sqrt M.
struct UniformScanReport {
  int M = 0;
  double c = 0.0;
  double threshold = 0.0;
  double count_bound = 0.0;  // c M / log^4 M
  std::size_t max_count = 0;
  double mean_count = 0.0;
  int signals = 0;
};

UniformScanReport uniform_bound_scan(int M, double c, int signals, std::uint64_t seed);

enum class DeltaStrategy { kAuto, kExhaustive, kRandom, kGreedy, kRandomAndGreedy };

struct DeltaEstimate {
  double value = 0.0;  // smallest sigma_min^2 found
  std::size_t keep = 0;
  bool exhaustive = false;
  std::size_t subsets_evaluated = 0;
  double random_min = 0.0;  // NaN when not run
  double greedy_min = 0.0;  // NaN when not run
};

/// Upper estimate of min over column subsets S with |S| >= fraction * N of
/// sigma_min^2(Phi_S^*). kAuto enumerates all subsets of the minimal size when
/// there are at most 1e5 of them, and otherwise combines `budget` random
/// subsets with one greedy path that repeatedly drops the column whose
/// removal lowers sigma_min the most.
DeltaEstimate delta_estimate(const CMatrix& synthesis, double fraction, DeltaStrategy strategy, std::size_t budget,
                             Rng& rng);

inline DeltaEstimate delta_estimate(const GaborFrame& frame, double fraction, DeltaStrategy strategy,
                                    std::size_t budget, Rng& rng) {
  return delta_estimate(frame.synthesis(), fraction, strategy, budget, rng);
}

}  // namespace tfphase
