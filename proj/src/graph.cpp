// SPDX-License-Identifier: Apache-2.0
#include "tfphase/graph.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <stdexcept>

#include "tfphase/eigen_tools.hpp"

namespace tfphase {

MeasurementGraph::MeasurementGraph(std::size_t num_vertices, std::vector<Edge> edges,
                                   std::vector<double> vertex_weights, std::vector<cdouble> edge_weights) {
  if (!vertex_weights.empty() && vertex_weights.size() != num_vertices)
    throw std::invalid_argument("one vertex weight per vertex required");
  if (!edge_weights.empty() && edge_weights.size() != edges.size())
    throw std::invalid_argument("one edge weight per edge required");
  for (const cdouble& w : edge_weights)
    if (std::abs(std::abs(w) - 1.0) > 1e-12) throw std::invalid_argument("edge weights must have unit modulus");

  auto topo = std::make_shared<Topology>();
  topo->num_vertices = num_vertices;
  std::vector<std::size_t> deg(num_vertices, 0);
  for (const Edge& e : edges) {
    if (e.a >= num_vertices || e.b >= num_vertices) throw std::invalid_argument("edge endpoint out of range");
    if (e.a == e.b) throw std::invalid_argument("self-loops are not allowed");
    ++deg[e.a];
    ++deg[e.b];
  }
  topo->offsets.assign(num_vertices + 1, 0);
  for (std::size_t v = 0; v < num_vertices; ++v) topo->offsets[v + 1] = topo->offsets[v] + deg[v];
  topo->adjacency.resize(topo->offsets.back());
  std::vector<std::size_t> fill(topo->offsets.begin(), topo->offsets.end() - 1);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto ei = static_cast<std::uint32_t>(i);
    topo->adjacency[fill[edges[i].a]++] = {edges[i].b, ei};
    topo->adjacency[fill[edges[i].b]++] = {edges[i].a, ei};
  }
  for (std::size_t v = 0; v < num_vertices; ++v) {
    std::sort(topo->adjacency.begin() + static_cast<std::ptrdiff_t>(topo->offsets[v]),
              topo->adjacency.begin() + static_cast<std::ptrdiff_t>(topo->offsets[v + 1]),
              [](const Neighbor& x, const Neighbor& y) { return x.vertex < y.vertex || (x.vertex == y.vertex && x.edge < y.edge); });
  }
  topo->edges = std::move(edges);
  topo_ = std::move(topo);
  vertex_weights_ = std::make_shared<const std::vector<double>>(std::move(vertex_weights));
  edge_weights_ = std::make_shared<const std::vector<cdouble>>(std::move(edge_weights));
  alive_.assign(num_vertices, 1);
  num_alive_ = num_vertices;
}

std::vector<std::size_t> MeasurementGraph::alive_vertices() const {
  std::vector<std::size_t> out;
  out.reserve(num_alive_);
  for (std::size_t v = 0; v < alive_.size(); ++v)
    if (alive_[v]) out.push_back(v);
  return out;
}

std::span<const Neighbor> MeasurementGraph::neighbors(std::size_t v) const {
  return {topo_->adjacency.data() + topo_->offsets[v], topo_->offsets[v + 1] - topo_->offsets[v]};
}

bool MeasurementGraph::edge_active(std::size_t e) const {
  const Edge& ed = topo_->edges[e];
  return alive_[ed.a] && alive_[ed.b];
}

std::size_t MeasurementGraph::degree(std::size_t v) const {
  if (!alive_[v]) return 0;
  std::size_t d = 0;
  for (const Neighbor& nb : neighbors(v)) d += alive_[nb.vertex] ? 1 : 0;
  return d;
}

std::size_t MeasurementGraph::num_active_edges() const {
  std::size_t n = 0;
  for (std::size_t e = 0; e < topo_->edges.size(); ++e) n += edge_active(e) ? 1 : 0;
  return n;
}

cdouble MeasurementGraph::oriented_weight(std::size_t e, std::size_t from) const {
  const cdouble w = (*edge_weights_)[e];
  return topo_->edges[e].a == from ? w : std::conj(w);
}

MeasurementGraph MeasurementGraph::without(std::span<const std::size_t> removed) const {
  MeasurementGraph g = *this;
  for (std::size_t v : removed) {
    if (g.alive_[v]) {
      g.alive_[v] = 0;
      --g.num_alive_;
    }
  }
  return g;
}

MeasurementGraph MeasurementGraph::restricted_to(std::span<const std::size_t> kept) const {
  MeasurementGraph g = *this;
  std::fill(g.alive_.begin(), g.alive_.end(), 0);
  g.num_alive_ = 0;
  for (std::size_t v : kept) {
    if (alive_[v] && !g.alive_[v]) {
      g.alive_[v] = 1;
      ++g.num_alive_;
    }
  }
  return g;
}

RMatrix adjacency_matrix(const Lattice& lattice, const DifferenceSet& C) {
  const int M = lattice.dim();
  RMatrix circ = RMatrix::Zero(M, M);
  // Circ(v)(i, j) = v(i - j): row l1, column l2 is an edge iff l1 - l2 in C.
  for (int i = 0; i < M; ++i)
    for (int j = 0; j < M; ++j) circ(i, j) = C.contains(i - j) ? 1.0 : 0.0;
  const int K = lattice.num_shifts();
  RMatrix A(K * M, K * M);
  for (int p = 0; p < K; ++p)
    for (int q = 0; q < K; ++q) A.block(p * M, q * M, M, M) = circ;
  return A;
}

RMatrix dense_adjacency(const MeasurementGraph& graph) {
  const std::vector<std::size_t> verts = graph.alive_vertices();
  std::vector<Eigen::Index> pos(graph.num_vertices(), -1);
  for (std::size_t i = 0; i < verts.size(); ++i) pos[verts[i]] = static_cast<Eigen::Index>(i);
  const auto n = static_cast<Eigen::Index>(verts.size());
  RMatrix A = RMatrix::Zero(n, n);
  for (std::size_t e = 0; e < graph.edges().size(); ++e) {
    if (!graph.edge_active(e)) continue;
    const Edge& ed = graph.edges()[e];
    A(pos[ed.a], pos[ed.b]) += 1.0;
    A(pos[ed.b], pos[ed.a]) += 1.0;
  }
  return A;
}

double fourier_bias(const DifferenceSet& C) {
  Signal ind = Signal::Zero(C.M);
  for (int c : C.elements) ind(c) = 1.0;
  const Signal f = dft(ind);
  double best = 0.0;
  for (int m = 1; m < C.M; ++m) best = std::max(best, std::abs(f(m)));
  return best;
}

double spectral_gap_closed_form(const DifferenceSet& C) {
  if (C.elements.empty()) throw EmptyDifferenceSetError();
  return 1.0 - fourier_bias(C) / static_cast<double>(C.size());
}

SpectrumSummary regular_spectrum(const MeasurementGraph& graph) {
  const std::size_t n = graph.num_alive();
  if (n == 0) throw std::invalid_argument("spectrum of an empty graph");
  const std::vector<std::size_t> verts = graph.alive_vertices();
  const std::size_t d = graph.degree(verts.front());
  for (std::size_t v : verts)
    if (graph.degree(v) != d) throw std::invalid_argument("graph is not regular");
  if (d == 0) throw std::invalid_argument("graph has no edges");

  Eigen::SelfAdjointEigenSolver<RMatrix> es(dense_adjacency(graph), Eigen::EigenvaluesOnly);
  SpectrumSummary out;
  out.eigenvalues = es.eigenvalues().reverse();
  out.degree = static_cast<double>(d);
  const auto m = out.eigenvalues.size();
  out.lambda = m > 1 ? std::max(std::abs(out.eigenvalues(1)), std::abs(out.eigenvalues(m - 1))) : 0.0;
  out.gap = (out.degree - out.lambda) / out.degree;
  return out;
}

namespace {

struct NormalizedOperator {
  std::vector<std::size_t> verts;
  std::vector<Eigen::Index> pos;
  Eigen::VectorXd inv_sqrt_deg;
};

NormalizedOperator make_operator(const MeasurementGraph& graph) {
  NormalizedOperator op;
  op.verts = graph.alive_vertices();
  op.pos.assign(graph.num_vertices(), -1);
  op.inv_sqrt_deg.resize(static_cast<Eigen::Index>(op.verts.size()));
  for (std::size_t i = 0; i < op.verts.size(); ++i) {
    op.pos[op.verts[i]] = static_cast<Eigen::Index>(i);
    op.inv_sqrt_deg(static_cast<Eigen::Index>(i)) = 1.0 / std::sqrt(static_cast<double>(graph.degree(op.verts[i])));
  }
  return op;
}

// Second largest eigenpair of N = D^{-1/2} A D^{-1/2}.
LaplacianEigenpair second_normalized(const MeasurementGraph& graph, bool want_vector) {
  const NormalizedOperator op = make_operator(graph);
  const auto n = static_cast<Eigen::Index>(op.verts.size());
  LaplacianEigenpair out;
  if (n <= kDenseEigenLimit) {
    RMatrix A = dense_adjacency(graph);
    RMatrix N = op.inv_sqrt_deg.asDiagonal() * A * op.inv_sqrt_deg.asDiagonal();
    Eigen::SelfAdjointEigenSolver<RMatrix> es(N, want_vector ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
    out.value = 1.0 - es.eigenvalues()(n - 2);
    if (want_vector) out.vector = es.eigenvectors().col(n - 2);
    return out;
  }
  // N has top eigenvector D^{1/2} 1 on a connected graph; deflate it and
  // take the largest eigenvalue of (I + N) / 2 on the complement.
  Eigen::MatrixXd top(n, 1);
  for (Eigen::Index i = 0; i < n; ++i) top(i, 0) = 1.0 / op.inv_sqrt_deg(i);
  top.col(0).normalize();
  auto apply = [&](const Eigen::VectorXd& v) {
    Eigen::VectorXd s = op.inv_sqrt_deg.cwiseProduct(v);
    Eigen::VectorXd r = Eigen::VectorXd::Zero(n);
    for (std::size_t e = 0; e < graph.edges().size(); ++e) {
      if (!graph.edge_active(e)) continue;
      const Edge& ed = graph.edges()[e];
      r(op.pos[ed.a]) += s(op.pos[ed.b]);
      r(op.pos[ed.b]) += s(op.pos[ed.a]);
    }
    return Eigen::VectorXd(0.5 * (v + op.inv_sqrt_deg.cwiseProduct(r)));
  };
  const auto pair = lanczos_largest(apply, n, top);
  out.value = 1.0 - (2.0 * pair.value - 1.0);
  out.vector = pair.vector;
  return out;
}

bool has_isolated(const MeasurementGraph& graph) {
  for (std::size_t v : graph.alive_vertices())
    if (graph.degree(v) == 0) return true;
  return false;
}

}  // namespace

double normalized_spectral_gap(const MeasurementGraph& graph) {
  if (graph.num_alive() == 0) throw std::invalid_argument("spectral gap of an empty graph");
  if (graph.num_alive() == 1 || has_isolated(graph)) return 0.0;
  return second_normalized(graph, false).value;
}

LaplacianEigenpair normalized_laplacian_fiedler(const MeasurementGraph& graph) {
  if (graph.num_alive() < 2) throw std::invalid_argument("Fiedler vector needs at least two vertices");
  if (has_isolated(graph)) throw std::invalid_argument("Fiedler vector undefined with isolated vertices");
  return second_normalized(graph, true);
}

std::vector<std::vector<std::size_t>> connected_components(const MeasurementGraph& graph) {
  std::vector<std::vector<std::size_t>> comps;
  std::vector<char> seen(graph.num_vertices(), 0);
  for (std::size_t s = 0; s < graph.num_vertices(); ++s) {
    if (!graph.alive(s) || seen[s]) continue;
    std::vector<std::size_t> comp;
    std::queue<std::size_t> q;
    q.push(s);
    seen[s] = 1;
    while (!q.empty()) {
      const std::size_t v = q.front();
      q.pop();
      comp.push_back(v);
      for (const Neighbor& nb : graph.neighbors(v)) {
        if (graph.alive(nb.vertex) && !seen[nb.vertex]) {
          seen[nb.vertex] = 1;
          q.push(nb.vertex);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    comps.push_back(std::move(comp));
  }
  return comps;
}

std::vector<std::size_t> largest_connected_component(const MeasurementGraph& graph) {
  auto comps = connected_components(graph);
  if (comps.empty()) return {};
  // Components come out ordered by their smallest vertex, so the first
  // maximum wins ties.
  std::size_t best = 0;
  for (std::size_t i = 1; i < comps.size(); ++i)
    if (comps[i].size() > comps[best].size()) best = i;
  return std::move(comps[best]);
}

double expansion_ratio(const MeasurementGraph& graph) {
  const std::vector<std::size_t> verts = graph.alive_vertices();
  const std::size_t n = verts.size();
  if (n > 16) throw std::invalid_argument("expansion ratio is exhaustive; at most 16 vertices");
  if (n < 2) throw std::invalid_argument("expansion ratio needs at least two vertices");
  std::vector<int> pos(graph.num_vertices(), -1);
  for (std::size_t i = 0; i < n; ++i) pos[verts[i]] = static_cast<int>(i);
  std::vector<std::pair<int, int>> active;
  for (std::size_t e = 0; e < graph.edges().size(); ++e)
    if (graph.edge_active(e)) active.emplace_back(pos[graph.edges()[e].a], pos[graph.edges()[e].b]);

  double best = std::numeric_limits<double>::infinity();
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    const int size = std::popcount(mask);
    if (static_cast<std::size_t>(2 * size) > n) continue;
    int boundary = 0;
    for (const auto& [a, b] : active) boundary += (((mask >> a) ^ (mask >> b)) & 1u) ? 1 : 0;
    best = std::min(best, static_cast<double>(boundary) / size);
  }
  return best;
}

}  // namespace tfphase
