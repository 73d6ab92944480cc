// SPDX-License-Identifier: Apache-2.0
#include "tfphase/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>
#include <unordered_map>

namespace tfphase {

std::string format_double(double v) {
  if (std::isnan(v)) return "NA";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(s);
  while (std::getline(ss, cur, sep)) out.push_back(trim(cur));
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

double parse_double(const std::string& s, std::size_t line, const char* what) {
  if (s.empty()) throw ParseError(line, std::string("missing ") + what);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) throw ParseError(line, std::string("bad ") + what + " '" + s + "'");
  return v;
}

template <typename Int>
Int parse_int(const std::string& s, std::size_t line, const char* what) {
  Int v{};
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw ParseError(line, std::string("bad ") + what + " '" + s + "'");
  return v;
}

std::vector<int> parse_int_list(const std::string& s, std::size_t line, const char* what) {
  std::vector<int> out;
  if (trim(s).empty()) return out;
  for (const auto& tok : split(s, ',')) out.push_back(parse_int<int>(tok, line, what));
  return out;
}

std::string join(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

}  // namespace

void write_signal(std::ostream& out, const Signal& x) {
  out << "M=" << x.size() << "\n";
  for (Eigen::Index m = 0; m < x.size(); ++m) out << format_double(x(m).real()) << ',' << format_double(x(m).imag()) << "\n";
}

Signal read_signal(std::istream& in) {
  std::string raw;
  std::size_t line = 0;
  int M = -1;
  Signal x;
  Eigen::Index filled = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string s = trim(raw);
    if (s.empty() || s[0] == '#') continue;
    if (M < 0) {
      if (s.rfind("M=", 0) != 0) throw ParseError(line, "expected header 'M=<int>'");
      M = parse_int<int>(s.substr(2), line, "dimension");
      if (M < 1) throw ParseError(line, "dimension must be positive");
      x.resize(M);
      continue;
    }
    const auto parts = split(s, ',');
    if (parts.size() != 2) throw ParseError(line, "expected 're,im'");
    if (filled >= M) throw ParseError(line, "more than M entries");
    x(filled++) = cdouble(parse_double(parts[0], line, "real part"), parse_double(parts[1], line, "imaginary part"));
  }
  if (M < 0) throw ParseError(line + 1, "missing header 'M=<int>'");
  if (filled != M) throw ParseError(line + 1, "expected " + std::to_string(M) + " entries, found " + std::to_string(filled));
  return x;
}

void write_ensemble(std::ostream& out, const EnsembleHeader& h, const Lattice& lattice, const EdgeSet& edges,
                    const MeasurementEnsemble& ens) {
  out << "# M=" << h.M << "\n# F=" << join(h.F) << "\n# C=" << join(h.C) << "\n# seed=" << h.seed
      << "\n# sigma=" << format_double(h.sigma) << "\n";
  out << "kind,k1,l1,k2,l2,t,value\n";
  for (std::size_t v = 0; v < ens.vertex.size(); ++v) {
    const auto p = lattice.at(v);
    out << "V," << p.k << ',' << p.l << ",,,," << format_double(ens.vertex[v]) << "\n";
  }
  for (std::size_t e = 0; e < ens.edge.size(); ++e) {
    const auto p = lattice.at(edges.edges[e].a);
    const auto q = lattice.at(edges.edges[e].b);
    for (int t = 0; t < 3; ++t)
      out << "E," << p.k << ',' << p.l << ',' << q.k << ',' << q.l << ',' << t << ','
          << format_double(ens.edge[e][static_cast<std::size_t>(t)]) << "\n";
  }
}

EnsembleFile read_ensemble(std::istream& in) {
  EnsembleFile file;
  auto& h = file.header;
  std::map<std::string, std::pair<std::string, std::size_t>> meta;
  std::string raw;
  std::size_t line = 0;
  bool have_columns = false;
  std::vector<std::pair<std::size_t, std::string>> rows;
  while (std::getline(in, raw)) {
    ++line;
    const std::string s = trim(raw);
    if (s.empty()) continue;
    if (s[0] == '#') {
      const std::string body = trim(s.substr(1));
      const auto eq = body.find('=');
      if (eq == std::string::npos) continue;
      meta[trim(body.substr(0, eq))] = {trim(body.substr(eq + 1)), line};
      continue;
    }
    if (!have_columns) {
      if (s != "kind,k1,l1,k2,l2,t,value") throw ParseError(line, "expected column header 'kind,k1,l1,k2,l2,t,value'");
      have_columns = true;
      continue;
    }
    rows.emplace_back(line, s);
  }
  for (const char* key : {"M", "F", "C", "seed", "sigma"})
    if (!meta.count(key)) throw ParseError(line + 1, std::string("header lacks '") + key + "'");
  h.M = parse_int<int>(meta["M"].first, meta["M"].second, "M");
  h.F = parse_int_list(meta["F"].first, meta["F"].second, "shift");
  h.C = parse_int_list(meta["C"].first, meta["C"].second, "difference");
  h.seed = parse_int<std::uint64_t>(meta["seed"].first, meta["seed"].second, "seed");
  h.sigma = parse_double(meta["sigma"].first, meta["sigma"].second, "sigma");

  std::unique_ptr<Lattice> lattice;
  EdgeSet edges;
  try {
    lattice = std::make_unique<Lattice>(h.F, h.M);
    edges = build_edge_set(*lattice, difference_set_from(h.C, h.M));
  } catch (const std::exception& e) {
    throw ParseError(meta["F"].second, std::string("inconsistent header: ") + e.what());
  }
  std::unordered_map<int, int> pos;
  for (int i = 0; i < lattice->num_shifts(); ++i) pos[lattice->shifts()[static_cast<std::size_t>(i)]] = i;
  std::unordered_map<std::uint64_t, std::size_t> edge_index;
  for (std::size_t e = 0; e < edges.size(); ++e)
    edge_index[(static_cast<std::uint64_t>(edges.edges[e].a) << 32) | edges.edges[e].b] = e;

  auto& ens = file.ensemble;
  ens.vertex.assign(lattice->size(), std::numeric_limits<double>::quiet_NaN());
  ens.edge.assign(edges.size(), {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN(),
                                 std::numeric_limits<double>::quiet_NaN()});
  const auto vertex_of = [&](const std::string& ks, const std::string& ls, std::size_t ln) {
    const int k = parse_int<int>(ks, ln, "time shift");
    const int l = parse_int<int>(ls, ln, "frequency shift");
    const auto it = pos.find(k);
    if (it == pos.end() || l < 0 || l >= h.M) throw ParseError(ln, "index outside the lattice");
    return lattice->index_of(it->second, l);
  };
  for (const auto& [ln, s] : rows) {
    const auto parts = split(s, ',');
    if (parts.size() != 7) throw ParseError(ln, "expected 7 columns");
    const double value = parse_double(parts[6], ln, "value");
    if (parts[0] == "V") {
      const std::size_t v = vertex_of(parts[1], parts[2], ln);
      if (!std::isnan(ens.vertex[v])) throw ParseError(ln, "duplicate vertex row");
      ens.vertex[v] = value;
    } else if (parts[0] == "E") {
      const std::size_t a = vertex_of(parts[1], parts[2], ln);
      const std::size_t b = vertex_of(parts[3], parts[4], ln);
      const int t = parse_int<int>(parts[5], ln, "t");
      if (t < 0 || t > 2) throw ParseError(ln, "t must be 0, 1 or 2");
      const auto it = edge_index.find((static_cast<std::uint64_t>(a) << 32) | b);
      if (it == edge_index.end()) throw ParseError(ln, "pair is not an edge for the header's F and C");
      double& slot = ens.edge[it->second][static_cast<std::size_t>(t)];
      if (!std::isnan(slot)) throw ParseError(ln, "duplicate edge row");
      slot = value;
    } else {
      throw ParseError(ln, "kind must be V or E");
    }
  }
  for (double v : ens.vertex)
    if (std::isnan(v)) throw ParseError(line + 1, "missing vertex measurements");
  for (const auto& e : ens.edge)
    for (double v : e)
      if (std::isnan(v)) throw ParseError(line + 1, "missing edge measurements");
  return file;
}

void write_graph_edges(std::ostream& out, const MeasurementGraph& graph) {
  out << "v1,v2\n";
  for (std::size_t e = 0; e < graph.edges().size(); ++e)
    if (graph.edge_active(e)) out << graph.edges()[e].a << ',' << graph.edges()[e].b << "\n";
}

void write_vertex_weights(std::ostream& out, const MeasurementGraph& graph) {
  out << "vertex,weight\n";
  for (std::size_t v : graph.alive_vertices())
    out << v << ',' << (graph.has_vertex_weights() ? format_double(graph.vertex_weight(v)) : std::string("NA")) << "\n";
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  f << contents;
  if (!f) throw IoError("write to '" + path + "' failed");
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace tfphase
