// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "tfphase/graph.hpp"

namespace tfphase {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input; `line` is 1-based.
class ParseError : public IoError {
 public:
  ParseError(std::size_t line, const std::string& what)
      : IoError("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Round-trippable decimal ("%.17g"); NaN prints as NA.
std::string format_double(double v);

/// "M=<int>" followed by one "re,im" line per entry.
void write_signal(std::ostream& out, const Signal& x);
Signal read_signal(std::istream& in);

struct EnsembleHeader {
  int M = 0;
  std::vector<int> F;
  std::vector<int> C;
  std::uint64_t seed = 0;
  double sigma = 0.0;
};

struct EnsembleFile {
  EnsembleHeader header;
  MeasurementEnsemble ensemble;
};

/// Columns kind,k1,l1,k2,l2,t,value; vertex rows leave k2,l2,t empty.
void write_ensemble(std::ostream& out, const EnsembleHeader& header, const Lattice& lattice, const EdgeSet& edges,
                    const MeasurementEnsemble& ensemble);
/// Every vertex and every (edge, t) of the lattice/C described by the header
/// must appear exactly once, in any order.
EnsembleFile read_ensemble(std::istream& in);

/// Active edges as "v1,v2".
void write_graph_edges(std::ostream& out, const MeasurementGraph& graph);
/// Alive vertices as "vertex,weight".
void write_vertex_weights(std::ostream& out, const MeasurementGraph& graph);

/// Opens a file or throws IoError.
void write_file(const std::string& path, const std::string& contents);
std::string read_file(const std::string& path);

}  // namespace tfphase
