// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "tfphase/gabor.hpp"
#include "tfphase/robust.hpp"

namespace tfphase {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Mode { kNoiseless, kRobust };

const char* mode_name(Mode mode);
Mode parse_mode(const std::string& text);

/// Grids for the experiment runners. Sweeps always use |F| = K evenly spaced
/// shifts, since an explicit F list is tied to one dimension.
struct ExperimentGrid {
  std::vector<int> dims{32, 64, 128};                   // dim-sweep and d-sweep
  std::vector<double> sigmas{1e-4, 2e-4, 4e-4, 8e-4};  // noise-sweep
  std::vector<double> ds{3, 4, 5, 6, 7, 8, 9, 10};      // d-sweep
  double fixed_sigma = 1e-3;                            // dim-sweep and d-sweep
  int noise_sweep_M = 100;
  std::vector<int> delta_dims{8, 16, 32, 64};
  double delta_fraction = 2.0 / 3.0;
  std::size_t delta_budget = 200;
  bool timing = false;  // emit runtime_ms; off by default so CSVs are byte-reproducible
};

struct RunConfig {
  std::string preset = "fast";  // "fast": K=2, d=3; "guarantee": K=12, d=144
  int M = 32;
  std::vector<int> F;  // explicit shifts; empty means K evenly spaced
  int K = 2;
  double d = 3.0;
  double sigma = 0.0;
  RobustParams robust;
  Mode mode = Mode::kRobust;
  std::uint64_t seed = 1;
  int trials = 1;
  std::string output;
  int jobs = 0;  // 0: OpenMP default
  ExperimentGrid experiment;

  Lattice lattice() const;
  void validate() const;
};

/// Parses a JSON document; absent fields keep their defaults, and K and d
/// follow the preset unless given. Throws ConfigError.
RunConfig config_from_json(const std::string& text);
std::string config_to_json(const RunConfig& config, int indent = -1);

}  // namespace tfphase
