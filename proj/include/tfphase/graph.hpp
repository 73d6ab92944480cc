// SPDX-License-Identifier: Apache-2.0
//
// Graph of measurements G = (Lambda, E): vertices weighted by b_lambda,
// edges optionally weighted by unit-modulus relative phases. Spectral
// quantities, connectivity and exhaustive expansion for small graphs.
#pragma once

#include <memory>
#include <span>
#include <vector>

#include "tfphase/measurement.hpp"

namespace tfphase {

struct Neighbor {
  std::uint32_t vertex;
  std::uint32_t edge;
};

/// Immutable snapshot. Vertex deletion returns a new graph sharing the
/// topology and weights; only the alive mask is copied.
class MeasurementGraph {
 public:
  /// Edge weights, when given, are one per edge, oriented from edge.a to
  /// edge.b, and must have modulus 1 (tolerance 1e-12).
  MeasurementGraph(std::size_t num_vertices, std::vector<Edge> edges, std::vector<double> vertex_weights = {},
                   std::vector<cdouble> edge_weights = {});

  static MeasurementGraph from_edge_set(const EdgeSet& edges, std::vector<double> vertex_weights = {}) {
    return MeasurementGraph(edges.num_vertices, edges.edges, std::move(vertex_weights));
  }

  std::size_t num_vertices() const { return topo_->num_vertices; }
  std::size_t num_alive() const { return num_alive_; }
  bool alive(std::size_t v) const { return alive_[v] != 0; }
  std::vector<std::size_t> alive_vertices() const;

  const std::vector<Edge>& edges() const { return topo_->edges; }
  std::span<const Neighbor> neighbors(std::size_t v) const;
  bool edge_active(std::size_t e) const;
  std::size_t degree(std::size_t v) const;
  std::size_t num_active_edges() const;

  bool has_vertex_weights() const { return !vertex_weights_->empty(); }
  double vertex_weight(std::size_t v) const { return (*vertex_weights_)[v]; }
  bool has_edge_weights() const { return !edge_weights_->empty(); }
  cdouble edge_weight(std::size_t e) const { return (*edge_weights_)[e]; }
  /// Relative phase read along edge e starting at vertex `from`.
  cdouble oriented_weight(std::size_t e, std::size_t from) const;

  MeasurementGraph without(std::span<const std::size_t> removed) const;
  MeasurementGraph restricted_to(std::span<const std::size_t> kept) const;

 private:
  struct Topology {
    std::size_t num_vertices = 0;
    std::vector<Edge> edges;
    std::vector<std::size_t> offsets;
    std::vector<Neighbor> adjacency;  // per vertex, sorted by neighbor index
  };

  std::shared_ptr<const Topology> topo_;
  std::shared_ptr<const std::vector<double>> vertex_weights_;
  std::shared_ptr<const std::vector<cdouble>> edge_weights_;
  std::vector<char> alive_;
  std::size_t num_alive_ = 0;
};

/// J (x) Circ(1_C), J the |F| x |F| all-ones matrix: the adjacency of the
/// pristine graph in lattice order.
RMatrix adjacency_matrix(const Lattice& lattice, const DifferenceSet& C);

/// 0/1 adjacency of the alive part of `graph`, rows in alive_vertices() order.
RMatrix dense_adjacency(const MeasurementGraph& graph);

/// ||C||_u = max_{m != 0} |F 1_C (m)|.
double fourier_bias(const DifferenceSet& C);

/// 1 - ||C||_u / |C|.
double spectral_gap_closed_form(const DifferenceSet& C);

struct SpectrumSummary {
  Eigen::VectorXd eigenvalues;  // descending
  double degree = 0.0;
  double lambda = 0.0;  // max(|lambda_2|, |lambda_n|)
  double gap = 0.0;     // (d - lambda) / d
};

/// Adjacency spectrum of a regular graph. Throws std::invalid_argument for an
/// empty or irregular graph.
SpectrumSummary regular_spectrum(const MeasurementGraph& graph);

/// 1 - mu_2 with mu_2 the second largest eigenvalue of D^{-1/2} A D^{-1/2},
/// i.e. the second smallest eigenvalue of the normalized Laplacian. Zero for
/// graphs with an isolated vertex. Throws on an empty graph.
double normalized_spectral_gap(const MeasurementGraph& graph);

/// Second eigenpair of the normalized Laplacian I - D^{-1/2} A D^{-1/2} over
/// the alive vertices (alive_vertices() order). Requires no isolated vertices.
struct LaplacianEigenpair {
  double value = 0.0;
  Eigen::VectorXd vector;
};
LaplacianEigenpair normalized_laplacian_fiedler(const MeasurementGraph& graph);

std::vector<std::vector<std::size_t>> connected_components(const MeasurementGraph& graph);

/// Vertices of a maximum-size component, sorted; ties go to the component
/// containing the smallest vertex index.
std::vector<std::size_t> largest_connected_component(const MeasurementGraph& graph);

/// h(G) = min_{|S| <= n/2} |dS| / |S| by exhaustive enumeration. Refuses
/// graphs with more than 16 alive vertices.
double expansion_ratio(const MeasurementGraph& graph);

}  // namespace tfphase
