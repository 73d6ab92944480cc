// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <limits>
#include <numeric>

#include "test_support.hpp"
#include "tfphase/analysis.hpp"
#include "tfphase/experiment.hpp"
#include "tfphase/robust.hpp"

using namespace tfphase;
using namespace tfphase::testing;
using Catch::Matchers::WithinAbs;

namespace {

MeasurementGraph path_with_weights(std::vector<double> w) {
  std::vector<Edge> e;
  for (std::uint32_t i = 0; i + 1 < w.size(); ++i) e.push_back({i, i + 1});
  const std::size_t n = w.size();
  return MeasurementGraph(n, e, std::move(w));
}

// Consistent unit weights from true coefficients.
MeasurementGraph consistent_graph(const Instance& inst, const Signal& x) {
  const Eigen::VectorXcd c = stft_coefficients(x, inst.frame);
  std::vector<cdouble> w;
  for (const Edge& e : inst.edges.edges) {
    const cdouble r = std::conj(c(e.a)) * c(e.b);
    w.push_back(r / std::abs(r));
  }
  std::vector<double> b(inst.frame.size());
  for (std::size_t v = 0; v < b.size(); ++v) b[v] = std::norm(c(static_cast<Eigen::Index>(v)));
  const MeasurementGraph g(inst.frame.size(), inst.edges.edges, b, w);
  // Synchronization is only meaningful on one component, as in the pipeline.
  return g.restricted_to(largest_connected_component(g));
}

}  // namespace

TEST_CASE("trim removes smallest then largest", "[robust]") {
  const MeasurementGraph g = path_with_weights({1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
  const MeasurementGraph t = trim_vertices(g, {0.8, 0.9});
  std::vector<double> kept;
  for (std::size_t v : t.alive_vertices()) kept.push_back(t.vertex_weight(v));
  CHECK(kept == std::vector<double>{3, 4, 5, 6, 7, 8, 9});
  CHECK(trim_vertices(g, {1.0, 1.0}).num_alive() == 10);
  CHECK_THROWS_AS(trim_vertices(g, {0.5, 0.5}), std::invalid_argument);
}

TEST_CASE("trim with duplicate weights matches a sort-and-slice oracle", "[robust]") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    Rng rng(s);
    std::uniform_int_distribution<int> dist(0, 5);
    std::vector<double> w(40);
    for (double& v : w) v = dist(rng);
    const MeasurementGraph g = path_with_weights(w);
    const MeasurementGraph t = trim_vertices(g, {0.9, 0.85});
    // Oracle: indices sorted by (weight, index), drop first 4; remaining sorted
    // by (-weight, index), drop first 6.
    std::vector<std::size_t> idx(40);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return std::pair(w[a], a) < std::pair(w[b], b); });
    std::vector<std::size_t> rest(idx.begin() + 4, idx.end());
    std::sort(rest.begin(), rest.end(), [&](auto a, auto b) { return std::pair(-w[a], a) < std::pair(-w[b], b); });
    std::vector<std::size_t> want(rest.begin() + 6, rest.end());
    std::sort(want.begin(), want.end());
    CHECK(t.alive_vertices() == want);
  }
}

TEST_CASE("clustering leaves a good graph alone", "[robust]") {
  const Instance inst = make_instance(Lattice::evenly_spaced(16, 2), 4.0, 3);
  const MeasurementGraph g = MeasurementGraph::from_edge_set(inst.edges);
  REQUIRE(normalized_spectral_gap(g) >= 0.1);
  const ClusteringResult r = spectral_clustering(g, 0.1, 16);
  CHECK(r.iterations == 0);
  CHECK(r.graph.num_alive() == g.num_alive());
}

TEST_CASE("clustering separates two cliques joined by an edge", "[robust]") {
  // K6 on 0..5 and K4 on 6..9, bridge 5-6. The K4 side has smaller volume.
  std::vector<Edge> e;
  for (std::uint32_t a = 0; a < 6; ++a)
    for (std::uint32_t b = a + 1; b < 6; ++b) e.push_back({a, b});
  for (std::uint32_t a = 6; a < 10; ++a)
    for (std::uint32_t b = a + 1; b < 10; ++b) e.push_back({a, b});
  e.push_back({5, 6});
  const MeasurementGraph g(10, e);

  // Exhaustive conductance oracle: the best cut is exactly the bridge.
  double best = 1e9;
  std::uint32_t best_mask = 0;
  for (std::uint32_t mask = 1; mask + 1 < (1u << 10); ++mask) {
    double cut = 0, vol = 0, vol_all = 0;
    for (std::uint32_t v = 0; v < 10; ++v) {
      vol_all += static_cast<double>(g.degree(v));
      if (mask >> v & 1u) vol += static_cast<double>(g.degree(v));
    }
    for (const Edge& ed : e) cut += ((mask >> ed.a ^ mask >> ed.b) & 1u) ? 1 : 0;
    const double h = cut / std::min(vol, vol_all - vol);
    if (h < best) best = h, best_mask = mask;
  }
  CHECK((best_mask == 0x3Fu || best_mask == 0x3C0u));

  const ClusteringResult r = spectral_clustering(g, 0.5, 4);
  CHECK(r.graph.alive_vertices() == std::vector<std::size_t>{0, 1, 2, 3, 4, 5});
  CHECK(r.gap >= 0.5);
  CHECK(r.iterations == 1);
  CHECK_THROWS_AS(spectral_clustering(g, 0.5, 7), ReconstructionError);
}

TEST_CASE("clustering after trimming a Bernoulli graph", "[robust]") {
  // Pruning guarantee with p = 0.95, q = 0.9: g(p,q) = 1 - 2(q(1-q) - (1-p)) = 0.92.
  const double p = 0.95, q = 0.9;
  const double gpq = 1.0 - 2.0 * (q * (1.0 - q) - (1.0 - p));
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Instance inst = make_instance(Lattice::evenly_spaced(32, 2), 144.0, 500 + s);
    const double spg = spectral_gap_closed_form(inst.C);
    REQUIRE(spg > gpq);
    const double tau = (spg - gpq) * (spg - gpq) / 8.0;
    Rng rng(s);
    std::vector<double> w(inst.frame.size());
    for (double& v : w) v = std::uniform_real_distribution<double>(0, 1)(rng);
    const MeasurementGraph g = MeasurementGraph::from_edge_set(inst.edges, w);
    const MeasurementGraph t = trim_vertices(g, {p, 1.0});
    const ClusteringResult r = spectral_clustering(t, tau, 32);
    CHECK(static_cast<double>(r.graph.num_alive()) >= q * g.num_vertices());
    CHECK(r.gap >= tau);
  }
}

TEST_CASE("sync adjacency is Hermitian with unit entries", "[robust][property]") {
  const Instance inst = make_instance(Lattice::evenly_spaced(16, 2), 3.0, 6);
  const MeasurementGraph g = consistent_graph(inst, random_signal(16, 7));
  const SyncAdjacency sa = build_sync_adjacency(g);
  const CMatrix A(sa.A);
  CHECK((A - A.adjoint()).norm() == 0.0);
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j)
      if (A(i, j) != cdouble(0.0)) CHECK_THAT(std::abs(A(i, j)), WithinAbs(1.0, 1e-15));
  for (Eigen::Index i = 0; i < A.rows(); ++i) CHECK(sa.degrees(i) == static_cast<double>(g.degree(sa.vertices[i])));
}

TEST_CASE("synchronization is exact on consistent weights", "[robust][property]") {
  for (std::uint64_t s = 0; s < 5; ++s) {
    const int M = 8 + 8 * static_cast<int>(s);
    const Instance inst = make_instance(Lattice::evenly_spaced(M, 2), 3.0, 40 + s);
    const Signal x = random_signal(M, 50 + s);
    const SyncResult r = angular_synchronization(consistent_graph(inst, x));
    const Eigen::VectorXcd c = stft_coefficients(x, inst.frame);
    REQUIRE(r.dropped.empty());
    const cdouble rot = r.phases[0] / (c(r.vertices[0]) / std::abs(c(r.vertices[0])));
    double worst = 0.0;
    for (std::size_t i = 0; i < r.vertices.size(); ++i) {
      const cdouble truth = c(r.vertices[i]) / std::abs(c(r.vertices[i]));
      worst = std::max(worst, std::abs(std::arg(r.phases[i] / (rot * truth))));
    }
    CHECK(worst <= 1e-8);
    CHECK_THAT(r.eigenvalue, WithinAbs(0.0, 1e-10));
  }
}

TEST_CASE("synchronization with all-ones weights is constant", "[robust]") {
  const Instance inst = make_instance(Lattice::evenly_spaced(10, 2), 3.0, 9);
  const MeasurementGraph g(inst.frame.size(), inst.edges.edges, {},
                           std::vector<cdouble>(inst.edges.size(), cdouble(1.0, 0.0)));
  const SyncResult r = angular_synchronization(g);
  for (const cdouble& ph : r.phases) CHECK(std::abs(ph - 1.0) < 1e-10);
}

TEST_CASE("synchronization error under small noise", "[robust]") {
  // sum ||arg v~ - arg c - theta||_T^2 <= C |eps|^2 / (tau^2 P^2) with
  // P = min over edges |conj(c1) c2 + eps|; observed C asserted <= 100.
  const int M = 32;
  for (std::uint64_t s = 0; s < 5; ++s) {
    const Instance inst = make_instance(Lattice::evenly_spaced(M, 2), 3.0, 60 + s);
    const Signal x = random_signal(M, 70 + s);
    const Eigen::VectorXcd c = stft_coefficients(x, inst.frame);
    Rng rng(80 + s);
    std::vector<cdouble> w;
    double eps2 = 0.0;
    double P = std::numeric_limits<double>::infinity();
    for (const Edge& e : inst.edges.edges) {
      const cdouble eps = 1e-4 * complex_normal(rng);
      eps2 += std::norm(eps);
      const cdouble r = std::conj(c(e.a)) * c(e.b) + eps;
      P = std::min(P, std::abs(r));
      w.push_back(r / std::abs(r));
    }
    const MeasurementGraph g(inst.frame.size(), inst.edges.edges, {}, w);
    const double tau = normalized_spectral_gap(g);
    const SyncResult r = angular_synchronization(g);
    REQUIRE(r.dropped.empty());
    cdouble align = 0.0;
    for (std::size_t i = 0; i < r.vertices.size(); ++i)
      align += r.phases[i] * std::conj(c(r.vertices[i]) / std::abs(c(r.vertices[i])));
    align /= std::abs(align);
    double err = 0.0;
    for (std::size_t i = 0; i < r.vertices.size(); ++i)
      err += std::pow(std::arg(r.phases[i] * std::conj(align * c(r.vertices[i]) / std::abs(c(r.vertices[i])))), 2);
    const double constant = err * tau * tau * P * P / eps2;
    INFO("observed constant " << constant);
    CHECK(constant <= 100.0);
  }
}

TEST_CASE("robust pipeline in the noiseless limit", "[robust]") {
  for (std::uint64_t s = 0; s < 5; ++s) {
    const Instance inst = make_instance(Lattice::evenly_spaced(16, 2), 3.0, 90 + s);
    Rng rng(s);
    const Signal x = random_unit_signal(16, rng);
    const RobustResult r = reconstruct_noisy(measure_noiseless(x, inst.frame, inst.edges), inst.frame, inst.edges, {});
    CHECK(global_phase_error(r.estimate, x) <= 1e-8);
    CHECK(r.diagnostics.surviving_vertices >= 16);
    CHECK(r.diagnostics.sigma_min > 0.0);
  }
}

TEST_CASE("robust pipeline is equivariant under a global phase", "[robust][property]") {
  const Instance inst = make_instance(Lattice::evenly_spaced(24, 2), 3.0, 101);
  const Signal x = random_signal(24, 102).normalized();
  const NoiseModel noise = NoiseModel::gaussian(1e-4, 5);
  const RobustResult a = reconstruct_noisy(measure(x, inst.frame, inst.edges, noise), inst.frame, inst.edges, {});
  const RobustResult b = reconstruct_noisy(measure(Signal(std::polar(1.0, 2.2) * x), inst.frame, inst.edges, noise),
                                           inst.frame, inst.edges, {});
  CHECK(global_phase_error(a.estimate, b.estimate) <= 1e-9);
}

TEST_CASE("median error grows with noise", "[robust]") {
  const std::vector<double> sigmas{1e-4, 4e-4, 1.6e-3};
  std::vector<double> medians;
  for (double sigma : sigmas) {
    std::vector<double> errs;
    for (std::uint64_t s = 0; s < 50; ++s)
      errs.push_back(run_trial(32, 2, 3.0, sigma, Mode::kRobust, {}, 1000 + s).error);
    std::nth_element(errs.begin(), errs.begin() + 25, errs.end());
    medians.push_back(errs[25]);
  }
  CHECK(medians[0] <= medians[1]);
  CHECK(medians[1] <= medians[2]);
}
