// SPDX-License-Identifier: Apache-2.0
#include "tfphase/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "tfphase/fft.hpp"

namespace tfphase {

bool DifferenceSet::contains(int c) const { return std::binary_search(elements.begin(), elements.end(), wrap(c, M)); }

DifferenceSet difference_set_from(const std::vector<int>& D, int M, double d) {
  std::set<int> C;
  for (int m : D) {
    const int r = wrap(m, M);
    if (r == 0) continue;
    C.insert(r);
    C.insert(wrap(-r, M));
  }
  if (C.empty()) throw EmptyDifferenceSetError();
  return DifferenceSet{M, d, std::vector<int>(C.begin(), C.end())};
}

DifferenceSet build_difference_set(int M, double d, Rng& rng) {
  if (M < 3) throw std::invalid_argument("difference set needs M >= 3");
  if (!(d > 0.0)) throw std::invalid_argument("Bernoulli parameter d must be positive");
  const double p = std::min(1.0, d * std::log(static_cast<double>(M)) / M);
  std::bernoulli_distribution coin(p);
  std::vector<int> D;
  for (int m = 0; m < M; ++m)
    if (coin(rng)) D.push_back(m);
  return difference_set_from(D, M, d);
}

EdgeSet build_edge_set(const Lattice& lattice, const DifferenceSet& C) {
  if (C.elements.empty()) throw EmptyDifferenceSetError();
  if (C.M != lattice.dim()) throw std::invalid_argument("difference set and lattice disagree on M");
  const int M = lattice.dim();
  const int K = lattice.num_shifts();
  if (lattice.size() > std::numeric_limits<std::uint32_t>::max()) throw std::length_error("lattice too large");

  EdgeSet out;
  out.num_vertices = lattice.size();
  for (int p1 = 0; p1 < K; ++p1) {
    for (int p2 = p1; p2 < K; ++p2) {
      for (int c : C.elements) {
        TripleBlock block{c, p1, p2, out.edges.size(), p1 == p2 ? M - c : M};
        for (int l = 0; l < block.count; ++l) {
          out.edges.push_back({static_cast<std::uint32_t>(lattice.index_of(p1, l)),
                               static_cast<std::uint32_t>(lattice.index_of(p2, (l + c) % M))});
        }
        out.blocks.push_back(block);
      }
    }
  }
  return out;
}

Signal edge_vector(const GaborFrame& frame, TimeFreqIndex lambda1, TimeFreqIndex lambda2, int t) {
  return time_freq_shift(frame.window(), lambda1) + cube_root(t) * time_freq_shift(frame.window(), lambda2);
}

Signal mask_vector(const Signal& g, int c, int k1, int k2, int t) {
  const int M = static_cast<int>(g.size());
  Signal p(M);
  for (int m = 0; m < M; ++m) {
    const cdouble den = g(wrap(static_cast<long long>(m) - k1, M));
    if (std::abs(den) < 1e-12) throw std::domain_error("mask division by near-zero window entry");
    const int phase = static_cast<int>((static_cast<long long>(wrap(c, M)) * m) % M);
    const cdouble e = std::polar(1.0, kTwoPi * phase / M) * cube_root(t);
    p(m) = 1.0 + e * g(wrap(static_cast<long long>(m) - k2, M)) / den;
  }
  return p;
}

namespace {

constexpr std::uint64_t kVertexTag = 0x5645525445580000ULL;
constexpr std::uint64_t kEdgeTag = 0x4544474500000000ULL;

}  // namespace

double vertex_noise(const NoiseModel& noise, std::size_t i) {
  if (noise.kind == NoiseModel::Kind::kNone) return 0.0;
  return noise.sigma * counter_normal(derive_seed(noise.seed, Stream::kNoise, kVertexTag), i);
}

double edge_noise(const NoiseModel& noise, std::size_t e, int t) {
  if (noise.kind == NoiseModel::Kind::kNone) return 0.0;
  return noise.sigma * counter_normal(derive_seed(noise.seed, Stream::kNoise, kEdgeTag), 3 * e + static_cast<std::size_t>(t));
}

MeasurementEnsemble measure_noiseless(const Signal& x, const GaborFrame& frame, const EdgeSet& edges) {
  const int M = frame.dim();
  if (x.size() != M) throw std::invalid_argument("signal length does not match frame dimension");
  if (edges.num_vertices != frame.size()) throw std::invalid_argument("edge set built for a different lattice");
  const Lattice& lat = frame.lattice();
  const Signal& g = frame.window();

  MeasurementEnsemble out;
  const Eigen::VectorXcd coeff = stft_coefficients(x, frame);
  out.vertex.resize(frame.size());
  for (std::size_t i = 0; i < frame.size(); ++i) out.vertex[i] = std::norm(coeff(static_cast<Eigen::Index>(i)));
  out.edge.resize(edges.size());

  // Modulation tables e^{2 pi i c m / M} are shared by all blocks with the same c.
  const auto nblocks = static_cast<long long>(edges.blocks.size());
#pragma omp parallel
  {
    std::vector<cdouble> buf(static_cast<std::size_t>(M));
#pragma omp for schedule(dynamic, 8)
    for (long long bi = 0; bi < nblocks; ++bi) {
      const TripleBlock& blk = edges.blocks[static_cast<std::size_t>(bi)];
      const int k1 = lat.shifts()[static_cast<std::size_t>(blk.pos1)];
      const int k2 = lat.shifts()[static_cast<std::size_t>(blk.pos2)];
      for (int t = 0; t < 3; ++t) {
        const cdouble w = cube_root(t);
        // q = T_k1 g + omega^t M_c T_k2 g equals p_{c,k1,k2}(t) . T_k1 g without the division.
        for (int m = 0; m < M; ++m) {
          const int phase = static_cast<int>((static_cast<long long>(blk.c) * m) % M);
          const cdouble q = g(wrap(static_cast<long long>(m) - k1, M)) +
                            w * std::polar(1.0, kTwoPi * phase / M) * g(wrap(static_cast<long long>(m) - k2, M));
          buf[static_cast<std::size_t>(m)] = x(m) * std::conj(q);
        }
        fft::forward(buf);
        for (int l = 0; l < blk.count; ++l)
          out.edge[blk.offset + static_cast<std::size_t>(l)][static_cast<std::size_t>(t)] = std::norm(buf[static_cast<std::size_t>(l)]);
      }
    }
  }
  return out;
}

double add_noise(MeasurementEnsemble& ensemble, const NoiseModel& noise) {
  if (noise.kind == NoiseModel::Kind::kNone) return 0.0;
  double sq = 0.0;
  for (std::size_t i = 0; i < ensemble.vertex.size(); ++i) {
    const double nu = vertex_noise(noise, i);
    ensemble.vertex[i] += nu;
    sq += nu * nu;
  }
  for (std::size_t e = 0; e < ensemble.edge.size(); ++e) {
    for (int t = 0; t < 3; ++t) {
      const double nu = edge_noise(noise, e, t);
      ensemble.edge[e][static_cast<std::size_t>(t)] += nu;
      sq += nu * nu;
    }
  }
  return std::sqrt(sq);
}

double noise_norm(const NoiseModel& noise, std::size_t num_vertices, std::size_t num_edges) {
  if (noise.kind == NoiseModel::Kind::kNone) return 0.0;
  double sq = 0.0;
  for (std::size_t i = 0; i < num_vertices; ++i) sq += std::pow(vertex_noise(noise, i), 2);
  for (std::size_t e = 0; e < num_edges; ++e)
    for (int t = 0; t < 3; ++t) sq += std::pow(edge_noise(noise, e, t), 2);
  return std::sqrt(sq);
}

MeasurementEnsemble measure(const Signal& x, const GaborFrame& frame, const EdgeSet& edges, const NoiseModel& noise) {
  MeasurementEnsemble out = measure_noiseless(x, frame, edges);
  add_noise(out, noise);
  return out;
}

}  // namespace tfphase
