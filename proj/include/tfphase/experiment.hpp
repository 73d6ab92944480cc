// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "tfphase/config.hpp"
#include "tfphase/measurement.hpp"

namespace tfphase {

/// Everything random about one measurement setup, regenerated from a seed.
struct Instance {
  GaborFrame frame;
  DifferenceSet C;
  EdgeSet edges;
};

Signal sample_window(int M, std::uint64_t seed);
/// Redraws with the next stream index if the Bernoulli draw comes up empty.
DifferenceSet sample_difference_set(int M, double d, std::uint64_t seed);
Instance make_instance(const Lattice& lattice, double d, std::uint64_t seed);
NoiseModel noise_for(double sigma, std::uint64_t seed);

enum class ExperimentKind { kDimSweep, kNoiseSweep, kDSweep, kDeltaStudy };

const char* experiment_name(ExperimentKind kind);
/// Throws ConfigError for unknown names.
ExperimentKind parse_experiment(const std::string& name);

struct ExperimentRecord {
  ExperimentKind kind = ExperimentKind::kDimSweep;
  int trial = 0;
  int M = 0;
  int K = 0;
  double d = 0.0;
  double sigma = 0.0;
  std::uint64_t seed = 0;
  double error = 0.0;
  double noise_norm = 0.0;
  double ratio = 0.0;  // NaN when noise_norm == 0
  double runtime_ms = 0.0;
  std::string status = "ok";
  std::size_t surviving_vertices = 0;
  double achieved_gap = 0.0;
  double sigma_min = 0.0;
  // delta-study only
  double delta = 0.0;
  std::size_t keep = 0;
  std::size_t subsets_evaluated = 0;
};

/// One reconstruction trial: x, window, C and noise all derive from `seed`.
ExperimentRecord run_trial(int M, int K, double d, double sigma, Mode mode, const RobustParams& params,
                           std::uint64_t seed);

/// Trial seeds depend on (master seed, kind, trial index) only, so every grid
/// point sees the same trial seeds. Failures land in `status`.
std::vector<ExperimentRecord> run_experiment(ExperimentKind kind, const RunConfig& config,
                                             std::ostream* progress = nullptr);

void write_experiment_csv(std::ostream& out, ExperimentKind kind, const RunConfig& config,
                          const std::vector<ExperimentRecord>& records);

}  // namespace tfphase
