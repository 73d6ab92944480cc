// SPDX-License-Identifier: Apache-2.0
//
// Measurement ensemble: the vertex frame (g, F x Z_M), the random symmetric
// difference set C, the edge set E and the three polarization measurements
// per edge, taken as magnitudes of masked Fourier transforms.
#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "tfphase/gabor.hpp"

namespace tfphase {

/// Symmetric subset C = D u (-D) \ {0} of Z_M, kept sorted.
struct DifferenceSet {
  int M = 0;
  double d = 0.0;  // Bernoulli intensity parameter it was drawn with (0 if given explicitly)
  std::vector<int> elements;

  std::size_t size() const { return elements.size(); }
  bool contains(int c) const;
};

class EmptyDifferenceSetError : public std::runtime_error {
 public:
  EmptyDifferenceSetError() : std::runtime_error("empty difference set") {}
};

/// Closes D under negation and drops 0. Throws EmptyDifferenceSetError if nothing remains.
DifferenceSet difference_set_from(const std::vector<int>& D, int M, double d = 0.0);

/// Draws 1_D(m) i.i.d. Bernoulli(min(1, d log M / M)) and returns C = D u (-D) \ {0}.
DifferenceSet build_difference_set(int M, double d, Rng& rng);

/// Undirected edge between lattice indices a < b.
struct Edge {
  std::uint32_t a = 0;
  std::uint32_t b = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Edges sharing one parameter triple (c, k1, k2): for l = 0 .. count-1 the
/// edge {(k1, l), (k2, l + c)}. Same-shift blocks (pos1 == pos2) only keep
/// l + c < M so each unordered pair appears once.
struct TripleBlock {
  int c = 0;
  int pos1 = 0;
  int pos2 = 0;
  std::size_t offset = 0;
  int count = 0;
};

/// E = {((k1,l1),(k2,l2)) : k1,k2 in F, l2 - l1 in C}, each unordered pair
/// stored once with the earlier lattice index first. Edges are grouped by
/// parameter triple; `blocks` describes the grouping.
struct EdgeSet {
  std::size_t num_vertices = 0;
  std::vector<Edge> edges;
  std::vector<TripleBlock> blocks;

  std::size_t size() const { return edges.size(); }
};

EdgeSet build_edge_set(const Lattice& lattice, const DifferenceSet& C);

/// pi(lambda1) g + omega^t pi(lambda2) g.
Signal edge_vector(const GaborFrame& frame, TimeFreqIndex lambda1, TimeFreqIndex lambda2, int t);

/// p_{c,k1,k2}(t)(m) = 1 + e^{2 pi i (c m / M + t / 3)} g(m - k2) / g(m - k1).
/// Throws std::domain_error if some |g(m - k1)| < 1e-12.
Signal mask_vector(const Signal& g, int c, int k1, int k2, int t);

struct NoiseModel {
  enum class Kind { kNone, kGaussian };
  Kind kind = Kind::kNone;
  double sigma = 0.0;  // standard deviation of each real noise entry
  std::uint64_t seed = 0;

  static NoiseModel none() { return {}; }
  static NoiseModel gaussian(double sigma, std::uint64_t seed) { return {Kind::kGaussian, sigma, seed}; }
};

/// Vertex measurements b_lambda (lattice order) and edge measurements
/// b_{lambda1 lambda2 t} (edge-set order). Noisy values may be negative.
struct MeasurementEnsemble {
  std::vector<double> vertex;
  std::vector<std::array<double, 3>> edge;

  std::size_t count() const { return vertex.size() + 3 * edge.size(); }
};

/// Noise value nu for vertex measurement i / edge measurement (e, t).
/// Depends only on (seed, index), never on evaluation order.
double vertex_noise(const NoiseModel& noise, std::size_t i);
double edge_noise(const NoiseModel& noise, std::size_t e, int t);

/// Noiseless ensemble via the FFT route, one transform per (c, k1, k2, t).
/// Parameter triples are processed in parallel.
MeasurementEnsemble measure_noiseless(const Signal& x, const GaborFrame& frame, const EdgeSet& edges);

/// Adds the model's noise in place and returns the noise norm |nu|_2.
double add_noise(MeasurementEnsemble& ensemble, const NoiseModel& noise);

/// |nu|_2 over an ensemble of the given shape.
double noise_norm(const NoiseModel& noise, std::size_t num_vertices, std::size_t num_edges);

MeasurementEnsemble measure(const Signal& x, const GaborFrame& frame, const EdgeSet& edges, const NoiseModel& noise);

/// Serial reference implementations kept for testing and benchmarking. They
/// evaluate every inner product directly, O(M) per measurement, no FFT.
namespace serial {

Eigen::VectorXcd stft_coefficients(const Signal& x, const GaborFrame& frame);
MeasurementEnsemble measure_noiseless(const Signal& x, const GaborFrame& frame, const EdgeSet& edges);

}  // namespace serial

}  // namespace tfphase
