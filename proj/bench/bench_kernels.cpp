// SPDX-License-Identifier: Apache-2.0
// Wall-clock comparison of the OpenMP/FFT kernels against the serial direct
// reference. Usage: tfphase_bench [M] [K] [repeats]

#include <chrono>
#include <cstdio>
#include <cstdlib>

#include <omp.h>

#include "tfphase/experiment.hpp"

using namespace tfphase;

template <typename F>
double time_ms(int repeats, F&& f) {
  const auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < repeats; ++i) f();
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count() / repeats;
}

int main(int argc, char** argv) {
  const int M = argc > 1 ? std::atoi(argv[1]) : 64;
  const int K = argc > 2 ? std::atoi(argv[2]) : 4;
  const int repeats = argc > 3 ? std::atoi(argv[3]) : 3;

  const Instance inst = make_instance(Lattice::evenly_spaced(M, K), 3.0, 7);
  Rng rng = make_rng(7, Stream::kSignal);
  const Signal x = random_unit_signal(M, rng);

  double sink = 0.0;
  const double stft_fast = time_ms(repeats, [&] { sink += stft_coefficients(x, inst.frame).norm(); });
  const double stft_ref = time_ms(repeats, [&] { sink += serial::stft_coefficients(x, inst.frame).norm(); });
  const double meas_fast = time_ms(repeats, [&] { sink += measure_noiseless(x, inst.frame, inst.edges).vertex[0]; });
  const double meas_ref =
      time_ms(repeats, [&] { sink += serial::measure_noiseless(x, inst.frame, inst.edges).vertex[0]; });

  std::printf("M=%d |F|=%d |C|=%zu |E|=%zu threads=%d\n", M, K, inst.C.size(), inst.edges.size(),
              omp_get_max_threads());
  std::printf("%-22s %12s %12s %9s\n", "kernel", "parallel_ms", "serial_ms", "speedup");
  std::printf("%-22s %12.3f %12.3f %9.2f\n", "stft_coefficients", stft_fast, stft_ref, stft_ref / stft_fast);
  std::printf("%-22s %12.3f %12.3f %9.2f\n", "measure_noiseless", meas_fast, meas_ref, meas_ref / meas_fast);
  return sink == 0.12345 ? 1 : 0;
}
