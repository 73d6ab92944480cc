// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>

#include "tfphase/types.hpp"

namespace tfphase {

using Rng = std::mt19937_64;

/// Named sub-streams derived from one master seed.
enum class Stream : std::uint64_t {
  kWindow = 1,
  kDifferenceSet = 2,
  kNoise = 3,
  kSignal = 4,
  kSubsets = 5,
  kTrial = 6,
};

std::uint64_t splitmix64(std::uint64_t x);

/// Seed for an independent generator keyed by (master, stream, index).
std::uint64_t derive_seed(std::uint64_t master, Stream stream, std::uint64_t index = 0);

inline Rng make_rng(std::uint64_t master, Stream stream, std::uint64_t index = 0) {
  return Rng(derive_seed(master, stream, index));
}

/// Standard normal sample that depends only on (key, counter). Used where
/// values must not depend on the order in which parallel workers run.
double counter_normal(std::uint64_t key, std::uint64_t counter);

/// Circularly-symmetric complex normal with E|z|^2 = 1.
cdouble complex_normal(Rng& rng);

/// Uniformly distributed unit vector in C^M.
Signal random_unit_signal(int M, Rng& rng);

}  // namespace tfphase
