// SPDX-License-Identifier: Apache-2.0
//
// Discrete time-frequency analysis on Z_M: cyclic translation, modulation,
// the unnormalized DFT, the short-time Fourier transform and Gabor frames.
//
// Conventions used throughout the library:
//   <u, v> = sum_m u(m) conj(v(m))        (conjugate-linear in v)
//   F x(l) = sum_m x(m) e^{-2 pi i m l/M} (forward transform is unnormalized)
//   pi(k, l) = M_l T_k                    (translate first, then modulate)
#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "tfphase/rng.hpp"
#include "tfphase/types.hpp"

namespace tfphase {

struct TimeFreqIndex {
  int k = 0;  // time shift
  int l = 0;  // frequency shift
  friend bool operator==(const TimeFreqIndex&, const TimeFreqIndex&) = default;
};

/// Lattice F x Z_M. Enumerated by position of k in F, then by l, so the
/// lattice index of (F[p], l) is p*M + l.
class Lattice {
 public:
  Lattice(std::vector<int> shifts, int M);

  /// |F| = K shifts spaced as evenly as possible over Z_M, starting at 0.
  static Lattice evenly_spaced(int M, int K);
  /// Z_M x Z_M.
  static Lattice full(int M) { return evenly_spaced(M, M); }

  int dim() const { return M_; }
  int num_shifts() const { return static_cast<int>(shifts_.size()); }
  std::size_t size() const { return shifts_.size() * static_cast<std::size_t>(M_); }
  const std::vector<int>& shifts() const { return shifts_; }

  TimeFreqIndex at(std::size_t index) const {
    return {shifts_[index / static_cast<std::size_t>(M_)], static_cast<int>(index % static_cast<std::size_t>(M_))};
  }
  std::size_t index_of(int shift_pos, int l) const {
    return static_cast<std::size_t>(shift_pos) * static_cast<std::size_t>(M_) + static_cast<std::size_t>(l);
  }
  int shift_pos_of(std::size_t index) const { return static_cast<int>(index / static_cast<std::size_t>(M_)); }

  friend bool operator==(const Lattice&, const Lattice&) = default;

 private:
  std::vector<int> shifts_;
  int M_;
};

/// Gabor system (g, Lambda). Frame vector at lambda = (k, l) is M_l T_k g.
class GaborFrame {
 public:
  GaborFrame(Signal window, Lattice lattice);

  const Signal& window() const { return window_; }
  const Lattice& lattice() const { return lattice_; }
  int dim() const { return lattice_.dim(); }
  std::size_t size() const { return lattice_.size(); }

  Signal vector(std::size_t index) const;
  /// Synthesis matrix: frame vectors as columns (all, or the given subset in order).
  CMatrix synthesis() const;
  CMatrix synthesis(std::span<const std::size_t> subset) const;

 private:
  Signal window_;
  Lattice lattice_;
};

Signal translate(const Signal& x, int k);
Signal modulate(const Signal& x, int l);
Signal time_freq_shift(const Signal& g, TimeFreqIndex lambda);

Signal dft(const Signal& x);
Signal idft(const Signal& x);

/// <u, v> = sum u(m) conj(v(m)).
cdouble inner(const Signal& u, const Signal& v);

/// <x, pi(lambda) g> for every lambda in the lattice, in lattice order,
/// computed as F(x . T_k conj(g))(l). Time shifts are processed in parallel.
Eigen::VectorXcd stft_coefficients(const Signal& x, const GaborFrame& frame);

/// Window drawn uniformly from the unit sphere of C^M as h/|h| with h i.i.d.
/// complex Gaussian. Draws with an entry of modulus below 1e-12 are rejected.
Signal sample_window_uniform_sphere(int M, Rng& rng);

class RankDeficientError : public std::runtime_error {
 public:
  RankDeficientError(Eigen::Index rank, Eigen::Index needed);
  Eigen::Index rank() const { return rank_; }

 private:
  Eigen::Index rank_;
};

/// Least-squares solution of Phi_S^* x = c over the frame vectors indexed by
/// `subset` (the canonical dual frame applied to c). Solved by column-pivoted
/// QR on the analysis matrix. Throws RankDeficientError if Phi_S has rank < M.
Signal least_squares_reconstruct(const GaborFrame& frame, std::span<const std::size_t> subset,
                                 const Eigen::VectorXcd& coefficients);

/// Smallest singular value of the analysis matrix Phi_S^*.
double analysis_sigma_min(const GaborFrame& frame, std::span<const std::size_t> subset);

/// True iff every M-subset of frame vectors has |det| > 1e-10 times the
/// product of its column norms. Throws std::invalid_argument when there are
/// more than 1e6 subsets to check.
bool full_spark_check(const GaborFrame& frame);

}  // namespace tfphase
