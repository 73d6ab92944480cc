// SPDX-License-Identifier: Apache-2.0
#include "tfphase/polarization.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace tfphase {

const char* ReconstructionError::stage_name(Stage stage) {
  switch (stage) {
    case Stage::kEmptyGraph: return "empty-graph";
    case Stage::kComponentTooSmall: return "component-too-small";
    case Stage::kRankDeficient: return "rank-deficient";
    case Stage::kClusteredBelowFrameSize: return "clustered-below-frame-size";
    case Stage::kSynchronization: return "synchronization";
  }
  return "unknown";
}

cdouble polarization_sum(const std::array<double, 3>& triple) {
  cdouble s{0.0, 0.0};
  for (int t = 0; t < 3; ++t) s += cube_root(t) * triple[static_cast<std::size_t>(t)];
  return s / 3.0;
}

RelativePhase relative_phase(double b1, double b2, const std::array<double, 3>& triple) {
  if (!(b1 > 0.0) || !(b2 > 0.0)) return {};
  const cdouble rho = polarization_sum(triple);
  if (std::abs(rho) < 1e-14) return {};
  const cdouble raw = rho / std::sqrt(b1 * b2);
  return {raw / std::abs(raw), true};
}

PropagationState propagate_phases(const MeasurementGraph& graph, std::size_t root) {
  if (!graph.has_vertex_weights() || !graph.has_edge_weights())
    throw std::invalid_argument("phase propagation needs vertex and edge weights");
  if (!graph.alive(root) || !(graph.vertex_weight(root) > 0.0))
    throw std::invalid_argument("propagation root must be alive with positive weight");

  PropagationState st;
  st.root = root;
  st.assigned.assign(graph.num_vertices(), std::nullopt);
  st.parent.assign(graph.num_vertices(), root);
  st.assigned[root] = cdouble(std::sqrt(graph.vertex_weight(root)), 0.0);

  std::queue<std::size_t> q;
  q.push(root);
  while (!q.empty()) {
    const std::size_t v = q.front();
    q.pop();
    st.visit_order.push_back(v);
    const cdouble cv = *st.assigned[v];
    const cdouble phase = cv / std::abs(cv);
    for (const Neighbor& nb : graph.neighbors(v)) {
      const std::size_t w = nb.vertex;
      if (!graph.alive(w) || st.assigned[w]) continue;
      const double bw = graph.vertex_weight(w);
      if (!(bw > 0.0)) continue;  // no phase passes through a zero vertex
      st.assigned[w] = graph.oriented_weight(nb.edge, v) * phase * std::sqrt(bw);
      st.parent[w] = v;
      q.push(w);
    }
  }
  return st;
}

NoiselessResult reconstruct_noiseless(const MeasurementEnsemble& ensemble, const GaborFrame& frame,
                                      const EdgeSet& edges) {
  const std::size_t n = frame.size();
  if (ensemble.vertex.size() != n || ensemble.edge.size() != edges.size())
    throw std::invalid_argument("ensemble does not match frame and edge set");

  NoiselessResult res;
  const double bmax = *std::max_element(ensemble.vertex.begin(), ensemble.vertex.end());
  if (!(bmax > 0.0)) throw ReconstructionError(ReconstructionError::Stage::kEmptyGraph, "all vertex measurements vanish");
  const double zero = 1e-14 * bmax;

  std::vector<std::size_t> removed;
  for (std::size_t v = 0; v < n; ++v)
    if (ensemble.vertex[v] < zero) removed.push_back(v);
  res.zero_vertices = removed.size();

  std::vector<Edge> kept_edges;
  std::vector<cdouble> weights;
  kept_edges.reserve(edges.size());
  weights.reserve(edges.size());
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const Edge& ed = edges.edges[e];
    if (ensemble.vertex[ed.a] < zero || ensemble.vertex[ed.b] < zero) continue;
    const RelativePhase rp = relative_phase(ensemble.vertex[ed.a], ensemble.vertex[ed.b], ensemble.edge[e]);
    if (!rp.defined) {
      ++res.undefined_edges;
      continue;
    }
    kept_edges.push_back(ed);
    weights.push_back(rp.value);
  }

  const MeasurementGraph graph = MeasurementGraph(n, std::move(kept_edges), ensemble.vertex, std::move(weights)).without(removed);
  res.component = largest_connected_component(graph);
  if (res.component.size() < static_cast<std::size_t>(frame.dim()))
    throw ReconstructionError(ReconstructionError::Stage::kComponentTooSmall,
                              "largest component has " + std::to_string(res.component.size()) + " vertices, fewer than M = " +
                                  std::to_string(frame.dim()));

  res.root = *std::max_element(res.component.begin(), res.component.end(), [&](std::size_t a, std::size_t b) {
    return ensemble.vertex[a] < ensemble.vertex[b];
  });
  const PropagationState st = propagate_phases(graph.restricted_to(res.component), res.root);

  Eigen::VectorXcd c(static_cast<Eigen::Index>(res.component.size()));
  for (std::size_t i = 0; i < res.component.size(); ++i) c(static_cast<Eigen::Index>(i)) = *st.assigned[res.component[i]];
  try {
    res.estimate = least_squares_reconstruct(frame, res.component, c);
  } catch (const RankDeficientError& err) {
    throw ReconstructionError(ReconstructionError::Stage::kRankDeficient, err.what());
  }
  return res;
}

}  // namespace tfphase
