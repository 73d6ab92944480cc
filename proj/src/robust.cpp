// SPDX-License-Identifier: Apache-2.0
#include "tfphase/robust.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tfphase/eigen_tools.hpp"

namespace tfphase {

namespace {

std::size_t trim_count(double keep, std::size_t n) {
  // Small slack so that e.g. (1 - 0.9) * 10 counts as 1, not 0.
  return static_cast<std::size_t>(std::floor((1.0 - keep) * static_cast<double>(n) + 1e-9));
}

}  // namespace

MeasurementGraph trim_vertices(const MeasurementGraph& graph, const TrimParams& params) {
  if (!(params.alpha > 0.0 && params.alpha <= 1.0 && params.beta > 0.0 && params.beta <= 1.0))
    throw std::invalid_argument("trim fractions must lie in (0, 1]");
  if (!(params.alpha + params.beta > 1.0)) throw std::invalid_argument("trim requires alpha + beta > 1");
  if (!graph.has_vertex_weights()) throw std::invalid_argument("trimming needs vertex weights");

  std::vector<std::size_t> verts = graph.alive_vertices();
  const std::size_t n = verts.size();
  const std::size_t n_small = trim_count(params.alpha, n);
  const std::size_t n_large = trim_count(params.beta, n);

  std::sort(verts.begin(), verts.end(), [&](std::size_t a, std::size_t b) {
    const double wa = graph.vertex_weight(a);
    const double wb = graph.vertex_weight(b);
    return wa < wb || (wa == wb && a < b);
  });
  std::vector<std::size_t> removed(verts.begin(), verts.begin() + static_cast<std::ptrdiff_t>(n_small));
  std::vector<std::size_t> rest(verts.begin() + static_cast<std::ptrdiff_t>(n_small), verts.end());
  std::sort(rest.begin(), rest.end(), [&](std::size_t a, std::size_t b) {
    const double wa = graph.vertex_weight(a);
    const double wb = graph.vertex_weight(b);
    return wa > wb || (wa == wb && a < b);
  });
  const std::size_t take = std::min(n_large, rest.size());
  removed.insert(removed.end(), rest.begin(), rest.begin() + static_cast<std::ptrdiff_t>(take));
  return graph.without(removed);
}

ClusteringResult spectral_clustering(const MeasurementGraph& graph, double tau, std::size_t min_vertices) {
  if (!(tau > 0.0 && tau < 1.0)) throw std::invalid_argument("tau must lie in (0, 1)");
  if (graph.num_alive() == 0) throw ReconstructionError(ReconstructionError::Stage::kEmptyGraph, "clustering an empty graph");

  MeasurementGraph current = graph.restricted_to(largest_connected_component(graph));
  int iterations = 0;
  while (true) {
    if (current.num_alive() < std::max<std::size_t>(min_vertices, 2))
      throw ReconstructionError(ReconstructionError::Stage::kClusteredBelowFrameSize,
                                "clustered below frame size: " + std::to_string(current.num_alive()) + " vertices left");
    const double gap = normalized_spectral_gap(current);
    if (gap >= tau) return {std::move(current), gap, iterations};

    const std::vector<std::size_t> verts = current.alive_vertices();
    const LaplacianEigenpair fiedler = normalized_laplacian_fiedler(current);
    const std::size_t n = verts.size();
    std::vector<double> key(n);
    std::vector<double> deg(n);
    double vol_total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      deg[i] = static_cast<double>(current.degree(verts[i]));
      key[i] = fiedler.vector(static_cast<Eigen::Index>(i)) / std::sqrt(deg[i]);
      vol_total += deg[i];
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return key[a] < key[b]; });

    // Sweep every prefix; h is symmetric in S and its complement, so this
    // covers both ends of the ordering.
    std::vector<char> in_s(current.num_vertices(), 0);
    double cut = 0.0;
    double vol_s = 0.0;
    double best_h = std::numeric_limits<double>::infinity();
    std::size_t best_i = 1;
    double best_vol = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const std::size_t v = verts[order[i]];
      std::size_t inside = 0;
      for (const Neighbor& nb : current.neighbors(v))
        if (current.alive(nb.vertex) && in_s[nb.vertex]) ++inside;
      cut += deg[order[i]] - 2.0 * static_cast<double>(inside);
      vol_s += deg[order[i]];
      in_s[v] = 1;
      const double h = cut / std::min(vol_s, vol_total - vol_s);
      if (h < best_h) {
        best_h = h;
        best_i = i + 1;
        best_vol = vol_s;
      }
    }

    std::vector<std::size_t> removed;
    const bool drop_prefix = best_vol <= vol_total - best_vol;
    for (std::size_t i = 0; i < n; ++i)
      if ((i < best_i) == drop_prefix) removed.push_back(verts[order[i]]);
    const MeasurementGraph pruned = current.without(removed);
    current = pruned.restricted_to(largest_connected_component(pruned));
    ++iterations;
  }
}

SyncAdjacency build_sync_adjacency(const MeasurementGraph& graph) {
  if (!graph.has_edge_weights()) throw std::invalid_argument("synchronization needs edge weights");
  SyncAdjacency out;
  out.vertices = graph.alive_vertices();
  std::vector<Eigen::Index> pos(graph.num_vertices(), -1);
  for (std::size_t i = 0; i < out.vertices.size(); ++i) pos[out.vertices[i]] = static_cast<Eigen::Index>(i);
  const auto n = static_cast<Eigen::Index>(out.vertices.size());
  std::vector<Eigen::Triplet<cdouble>> trips;
  out.degrees = Eigen::VectorXd::Zero(n);
  for (std::size_t e = 0; e < graph.edges().size(); ++e) {
    if (!graph.edge_active(e)) continue;
    const Edge& ed = graph.edges()[e];
    const cdouble w = graph.edge_weight(e);
    trips.emplace_back(pos[ed.a], pos[ed.b], w);
    trips.emplace_back(pos[ed.b], pos[ed.a], std::conj(w));
    out.degrees(pos[ed.a]) += 1.0;
    out.degrees(pos[ed.b]) += 1.0;
  }
  out.A.resize(n, n);
  out.A.setFromTriplets(trips.begin(), trips.end());
  return out;
}

SyncResult angular_synchronization(const MeasurementGraph& graph) {
  const SyncAdjacency sa = build_sync_adjacency(graph);
  const auto n = static_cast<Eigen::Index>(sa.vertices.size());
  if (n == 0) throw ReconstructionError(ReconstructionError::Stage::kEmptyGraph, "synchronizing an empty graph");
  if ((sa.degrees.array() == 0.0).any())
    throw ReconstructionError(ReconstructionError::Stage::kSynchronization, "synchronization graph has isolated vertices");
  const Eigen::VectorXd inv_sqrt = sa.degrees.cwiseSqrt().cwiseInverse();
  // H = D^{-1/2} conj(A) D^{-1/2}; L1 = I - H.
  const Eigen::SparseMatrix<cdouble> H = inv_sqrt.asDiagonal() * Eigen::SparseMatrix<cdouble>(sa.A.conjugate()) * inv_sqrt.asDiagonal();

  Eigen::VectorXcd u;
  SyncResult out;
  if (n <= kDenseEigenLimit) {
    const CMatrix L1 = CMatrix::Identity(n, n) - CMatrix(H);
    Eigen::SelfAdjointEigenSolver<CMatrix> es(L1);
    out.eigenvalue = es.eigenvalues()(0);
    u = es.eigenvectors().col(0);
  } else {
    // Smallest eigenpair of L1 is the largest of 2I - L1 = I + H.
    auto apply = [&](const Eigen::VectorXcd& v) { return Eigen::VectorXcd(v + H * v); };
    const auto pair = lanczos_largest(apply, n, CMatrix(n, 0));
    out.eigenvalue = 2.0 - pair.value;
    u = pair.vector;
  }

  Eigen::Index imax = 0;
  u.cwiseAbs().maxCoeff(&imax);
  u *= std::conj(u(imax)) / std::abs(u(imax));
  for (Eigen::Index i = 0; i < n; ++i) {
    const double mag = std::abs(u(i));
    if (mag < 1e-12) {
      out.dropped.push_back(sa.vertices[static_cast<std::size_t>(i)]);
      continue;
    }
    out.vertices.push_back(sa.vertices[static_cast<std::size_t>(i)]);
    out.phases.push_back(u(i) / mag);
  }
  return out;
}

RobustResult reconstruct_noisy(const MeasurementEnsemble& ensemble, const GaborFrame& frame, const EdgeSet& edges,
                               const RobustParams& params) {
  const std::size_t n = frame.size();
  if (ensemble.vertex.size() != n || ensemble.edge.size() != edges.size())
    throw std::invalid_argument("ensemble does not match frame and edge set");

  RobustResult res;
  std::vector<Edge> kept;
  std::vector<cdouble> weights;
  kept.reserve(edges.size());
  weights.reserve(edges.size());
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const cdouble rho = polarization_sum(ensemble.edge[e]);
    if (std::abs(rho) < 1e-14) {
      ++res.diagnostics.undefined_edges;
      continue;
    }
    kept.push_back(edges.edges[e]);
    weights.push_back(rho / std::abs(rho));
  }
  const MeasurementGraph graph(n, std::move(kept), ensemble.vertex, std::move(weights));

  const MeasurementGraph trimmed = trim_vertices(graph, params.trim);
  res.diagnostics.trimmed_vertices = n - trimmed.num_alive();

  ClusteringResult clustered = spectral_clustering(trimmed, params.tau, static_cast<std::size_t>(frame.dim()));
  res.diagnostics.clustering_iterations = clustered.iterations;
  res.diagnostics.achieved_gap = clustered.gap;

  const SyncResult sync = angular_synchronization(clustered.graph);
  res.diagnostics.sync_eigenvalue = sync.eigenvalue;
  res.support = sync.vertices;
  res.diagnostics.surviving_vertices = res.support.size();

  Eigen::VectorXcd c(static_cast<Eigen::Index>(res.support.size()));
  for (std::size_t i = 0; i < res.support.size(); ++i)
    c(static_cast<Eigen::Index>(i)) = sync.phases[i] * std::sqrt(std::max(ensemble.vertex[res.support[i]], 0.0));
  try {
    res.estimate = least_squares_reconstruct(frame, res.support, c);
  } catch (const RankDeficientError& err) {
    throw ReconstructionError(ReconstructionError::Stage::kRankDeficient, err.what());
  }
  res.diagnostics.sigma_min = analysis_sigma_min(frame, res.support);
  return res;
}

}  // namespace tfphase
