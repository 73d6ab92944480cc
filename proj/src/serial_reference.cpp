// SPDX-License-Identifier: Apache-2.0
#include <cmath>

#include "tfphase/measurement.hpp"

namespace tfphase::serial {

Eigen::VectorXcd stft_coefficients(const Signal& x, const GaborFrame& frame) {
  Eigen::VectorXcd out(static_cast<Eigen::Index>(frame.size()));
  for (std::size_t i = 0; i < frame.size(); ++i) out(static_cast<Eigen::Index>(i)) = inner(x, frame.vector(i));
  return out;
}

MeasurementEnsemble measure_noiseless(const Signal& x, const GaborFrame& frame, const EdgeSet& edges) {
  const Lattice& lat = frame.lattice();
  MeasurementEnsemble out;
  out.vertex.resize(frame.size());
  for (std::size_t i = 0; i < frame.size(); ++i) out.vertex[i] = std::norm(inner(x, frame.vector(i)));
  out.edge.resize(edges.size());
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const TimeFreqIndex l1 = lat.at(edges.edges[e].a);
    const TimeFreqIndex l2 = lat.at(edges.edges[e].b);
    for (int t = 0; t < 3; ++t) out.edge[e][static_cast<std::size_t>(t)] = std::norm(inner(x, edge_vector(frame, l1, l2, t)));
  }
  return out;
}

}  // namespace tfphase::serial
