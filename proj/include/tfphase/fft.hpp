// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>

#include "tfphase/types.hpp"

namespace tfphase::fft {

/// In-place unnormalized forward transform, X(l) = sum_m x(m) e^{-2 pi i m l / M}.
/// Safe to call concurrently from several threads.
void forward(std::span<cdouble> data);

/// In-place unnormalized backward transform (no 1/M factor).
void backward(std::span<cdouble> data);

}  // namespace tfphase::fft
