// SPDX-License-Identifier: Apache-2.0
//
// Noise-robust reconstruction: trimming of extreme vertices, spectral
// clustering until the normalized spectral gap reaches tau, angular
// synchronization with the connection Laplacian and a final least-squares
// solve on the surviving subframe.
#pragma once

#include <Eigen/Sparse>

#include "tfphase/polarization.hpp"

namespace tfphase {

struct TrimParams {
  double alpha = 0.95;  // keep-fraction after removing the smallest vertices
  double beta = 0.95;   // keep-fraction after removing the largest vertices
};

struct RobustParams {
  TrimParams trim;
  double tau = 0.1;
};

/// Removes floor((1-alpha) n) smallest-weight vertices, then floor((1-beta) n)
/// largest-weight vertices, n the number of alive vertices on input. Ties are
/// resolved by removing the smaller lattice index first.
MeasurementGraph trim_vertices(const MeasurementGraph& graph, const TrimParams& params);

struct ClusteringResult {
  MeasurementGraph graph;
  double gap = 0.0;
  int iterations = 0;
};

/// Restricts to the largest component, then while the normalized spectral gap
/// is below tau: sweep the vertices sorted by D^{-1/2} u (u the Fiedler vector
/// of I - D^{-1/2} A D^{-1/2}), find the minimum-conductance cut and delete
/// its side with the smaller degree sum. Throws ReconstructionError
/// (kClusteredBelowFrameSize) once fewer than `min_vertices` remain.
ClusteringResult spectral_clustering(const MeasurementGraph& graph, double tau, std::size_t min_vertices);

/// Weighted adjacency over the alive vertices of a graph with edge weights:
/// A(i, j) is the relative phase read from vertex i to vertex j, so
/// A(j, i) = conj(A(i, j)).
struct SyncAdjacency {
  std::vector<std::size_t> vertices;
  Eigen::SparseMatrix<cdouble> A;
  Eigen::VectorXd degrees;
};
SyncAdjacency build_sync_adjacency(const MeasurementGraph& graph);

struct SyncResult {
  std::vector<std::size_t> vertices;  // vertices that received a phase
  std::vector<cdouble> phases;        // unit modulus, aligned with `vertices`
  std::vector<std::size_t> dropped;   // eigenvector entry below 1e-12
  double eigenvalue = 0.0;            // smallest eigenvalue of the connection Laplacian
};

/// Bottom eigenvector u of L1 = I - D^{-1/2} conj(A) D^{-1/2}; returns
/// u / |u| with the phase fixed so that the largest-modulus entry is real
/// positive. Requires a graph without isolated vertices.
SyncResult angular_synchronization(const MeasurementGraph& graph);

struct RobustDiagnostics {
  std::size_t trimmed_vertices = 0;
  std::size_t surviving_vertices = 0;
  std::size_t undefined_edges = 0;
  int clustering_iterations = 0;
  double achieved_gap = 0.0;
  double sigma_min = 0.0;
  double sync_eigenvalue = 0.0;
};

struct RobustResult {
  Signal estimate;
  std::vector<std::size_t> support;
  RobustDiagnostics diagnostics;
};

RobustResult reconstruct_noisy(const MeasurementEnsemble& ensemble, const GaborFrame& frame, const EdgeSet& edges,
                               const RobustParams& params);

}  // namespace tfphase
