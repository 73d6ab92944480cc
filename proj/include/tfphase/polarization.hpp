// SPDX-License-Identifier: Apache-2.0
//
// Relative phases from three mixed measurements, phase propagation along a
// BFS tree and the noiseless reconstruction pipeline.
#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>

#include "tfphase/graph.hpp"

namespace tfphase {

/// Failure of a reconstruction pipeline, tagged with the stage that failed.
class ReconstructionError : public std::runtime_error {
 public:
  enum class Stage {
    kEmptyGraph,
    kComponentTooSmall,
    kRankDeficient,
    kClusteredBelowFrameSize,
    kSynchronization,
  };

  ReconstructionError(Stage stage, const std::string& what) : std::runtime_error(what), stage_(stage) {}
  Stage stage() const { return stage_; }
  static const char* stage_name(Stage stage);

 private:
  Stage stage_;
};

struct RelativePhase {
  cdouble value{0.0, 0.0};  // omega_{12}, unit modulus when defined
  bool defined = false;
};

/// (1/3) sum_t omega^t b_t, which equals conj(<x,phi_1>) <x,phi_2> for exact data.
cdouble polarization_sum(const std::array<double, 3>& triple);

/// omega_{12} = (1/3) sum_t omega^t b_{12t} / sqrt(b_1 b_2), renormalized to modulus 1.
/// Undefined when b_1 <= 0, b_2 <= 0 or the polarization sum is below 1e-14.
RelativePhase relative_phase(double b1, double b2, const std::array<double, 3>& triple);

struct PropagationState {
  std::size_t root = 0;
  std::vector<std::optional<cdouble>> assigned;  // indexed by vertex
  std::vector<std::size_t> visit_order;
  std::vector<std::size_t> parent;  // parent[root] == root
};

/// BFS from `root` over alive vertices. Each reached vertex gets
/// c = omega_{parent,v} (c_parent / |c_parent|) sqrt(b_v). Neighbors are
/// expanded in lattice order. The graph must carry vertex and edge weights.
PropagationState propagate_phases(const MeasurementGraph& graph, std::size_t root);

struct NoiselessResult {
  Signal estimate;
  std::vector<std::size_t> component;
  std::size_t root = 0;
  std::size_t zero_vertices = 0;
  std::size_t undefined_edges = 0;
};

/// Delete (near) zero vertices, keep the largest component, propagate from
/// its heaviest vertex and solve least squares on the component's subframe.
NoiselessResult reconstruct_noiseless(const MeasurementEnsemble& ensemble, const GaborFrame& frame,
                                      const EdgeSet& edges);

}  // namespace tfphase
