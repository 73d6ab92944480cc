// SPDX-License-Identifier: Apache-2.0
// tfphase command-line front end: measure, reconstruct, experiment.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>
#include <omp.h>

#include "tfphase/analysis.hpp"
#include "tfphase/config.hpp"
#include "tfphase/experiment.hpp"
#include "tfphase/io.hpp"
#include "tfphase/robust.hpp"

namespace {

using namespace tfphase;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitReconstruction = 3;
constexpr int kExitIo = 4;

struct CommonFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> mode;
  std::optional<std::string> output;
  std::optional<int> jobs;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config_path, "JSON run configuration");
  cmd->add_option("--seed", f.seed, "master seed (u64)");
  cmd->add_option("--mode", f.mode, "noiseless or robust");
  cmd->add_option("--output", f.output, "output path (stdout when omitted)");
  cmd->add_option("--jobs", f.jobs, "worker threads (0: all)");
}

RunConfig load_config(const CommonFlags& f) {
  RunConfig c = f.config_path.empty() ? RunConfig{} : config_from_json(read_file(f.config_path));
  if (f.seed) c.seed = *f.seed;
  if (f.mode) c.mode = parse_mode(*f.mode);
  if (f.output) c.output = *f.output;
  if (f.jobs) c.jobs = *f.jobs;
  if (c.jobs > 0) omp_set_num_threads(c.jobs);
  return c;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
  } else {
    write_file(path, text);
  }
}

int cmd_measure(const CommonFlags& flags, const std::string& signal_path, std::optional<double> sigma) {
  RunConfig c = load_config(flags);
  if (sigma) c.sigma = *sigma;
  std::istringstream in(read_file(signal_path));
  const Signal x = read_signal(in);
  if (!flags.config_path.empty() && c.M != x.size())
    throw ConfigError("dimension mismatch: config M=" + std::to_string(c.M) + " but signal has M=" +
                      std::to_string(x.size()));
  c.M = static_cast<int>(x.size());
  if (c.mode == Mode::kNoiseless) c.sigma = 0.0;
  c.validate();

  const Lattice lattice = c.lattice();
  const Instance inst = make_instance(lattice, c.d, c.seed);
  const MeasurementEnsemble ens = measure(x, inst.frame, inst.edges, noise_for(c.sigma, c.seed));
  std::ostringstream out;
  write_ensemble(out, EnsembleHeader{c.M, lattice.shifts(), inst.C.elements, c.seed, c.sigma}, lattice, inst.edges,
                 ens);
  emit(c.output, out.str());
  std::cerr << "measurements: " << ens.count() << "\n|C|: " << inst.C.size() << "\n";
  return kExitOk;
}

int cmd_reconstruct(const CommonFlags& flags, const std::string& ensemble_path, const std::string& truth_path,
                    std::string diagnostics_path, const std::string& graph_prefix) {
  RunConfig c = load_config(flags);
  std::istringstream in(read_file(ensemble_path));
  const EnsembleFile file = read_ensemble(in);
  const EnsembleHeader& h = file.header;
  if (!flags.config_path.empty() && c.M != h.M)
    throw ConfigError("dimension mismatch: config M=" + std::to_string(c.M) + " but ensemble has M=" +
                      std::to_string(h.M));
  c.M = h.M;
  c.F = h.F;
  c.seed = h.seed;
  c.sigma = h.sigma;
  c.validate();

  const Lattice lattice(h.F, h.M);
  const GaborFrame frame(sample_window(h.M, h.seed), lattice);
  const EdgeSet edges = build_edge_set(lattice, difference_set_from(h.C, h.M));

  if (!graph_prefix.empty()) {
    const auto graph = MeasurementGraph::from_edge_set(edges, file.ensemble.vertex);
    std::ostringstream e, w;
    write_graph_edges(e, graph);
    write_vertex_weights(w, graph);
    write_file(graph_prefix + "_edges.csv", e.str());
    write_file(graph_prefix + "_weights.csv", w.str());
  }

  nlohmann::json diag;
  Signal estimate;
  if (c.mode == Mode::kNoiseless) {
    const NoiselessResult res = reconstruct_noiseless(file.ensemble, frame, edges);
    estimate = res.estimate;
    diag["surviving_vertices"] = res.component.size();
    diag["achieved_gap"] = nullptr;
    diag["sigma_min"] = analysis_sigma_min(frame, res.component);
  } else {
    const RobustResult res = reconstruct_noisy(file.ensemble, frame, edges, c.robust);
    estimate = res.estimate;
    diag["surviving_vertices"] = res.diagnostics.surviving_vertices;
    diag["achieved_gap"] = res.diagnostics.achieved_gap;
    diag["sigma_min"] = res.diagnostics.sigma_min;
  }
  diag["noise_norm"] = noise_norm(noise_for(h.sigma, h.seed), lattice.size(), edges.size());
  diag["error"] = nullptr;
  if (!truth_path.empty()) {
    std::istringstream tin(read_file(truth_path));
    const Signal x = read_signal(tin);
    if (x.size() != estimate.size()) throw ConfigError("truth signal has a different dimension");
    const double err = global_phase_error(estimate, x);
    diag["error"] = err;
    std::cerr << "error: " << format_double(err) << "\n";
  }
  diag["seed"] = h.seed;
  diag["params"] = nlohmann::json::parse(config_to_json(c));

  std::ostringstream out;
  write_signal(out, estimate);
  emit(c.output, out.str());
  if (diagnostics_path.empty() && !c.output.empty()) diagnostics_path = c.output + ".diag.json";
  if (diagnostics_path.empty()) {
    std::cerr << diag.dump(2) << "\n";
  } else {
    write_file(diagnostics_path, diag.dump(2) + "\n");
  }
  return kExitOk;
}

int cmd_experiment(const CommonFlags& flags, const std::string& kind_name, std::optional<int> trials) {
  const ExperimentKind kind = parse_experiment(kind_name);
  RunConfig c = load_config(flags);
  if (trials) c.trials = *trials;
  c.validate();
  const auto records = run_experiment(kind, c, &std::cerr);
  std::ostringstream out;
  write_experiment_csv(out, kind, c, records);
  emit(c.output, out.str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Phase retrieval from Gabor phaseless measurements via polarization"};
  app.require_subcommand(1);

  CommonFlags mflags, rflags, eflags;
  std::string signal_path, ensemble_path, truth_path, diagnostics_path, graph_prefix, kind;
  std::optional<double> sigma;
  std::optional<int> trials;

  auto* measure_cmd = app.add_subcommand("measure", "simulate the measurement ensemble of a signal file");
  add_common(measure_cmd, mflags);
  measure_cmd->add_option("signal", signal_path, "signal file")->required();
  measure_cmd->add_option("--sigma", sigma, "noise standard deviation");

  auto* recon_cmd = app.add_subcommand("reconstruct", "recover a signal from an ensemble file");
  add_common(recon_cmd, rflags);
  recon_cmd->add_option("ensemble", ensemble_path, "ensemble CSV")->required();
  recon_cmd->add_option("--truth", truth_path, "reference signal; prints the error");
  recon_cmd->add_option("--diagnostics", diagnostics_path, "diagnostics JSON path");
  recon_cmd->add_option("--graph", graph_prefix, "write <prefix>_edges.csv and <prefix>_weights.csv");

  auto* exp_cmd = app.add_subcommand("experiment", "run a seeded experiment sweep");
  add_common(exp_cmd, eflags);
  exp_cmd->add_option("kind", kind, "dim-sweep, noise-sweep, d-sweep or delta-study")->required();
  exp_cmd->add_option("--trials", trials, "trials per grid point");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (measure_cmd->parsed()) return cmd_measure(mflags, signal_path, sigma);
    if (recon_cmd->parsed()) return cmd_reconstruct(rflags, ensemble_path, truth_path, diagnostics_path, graph_prefix);
    return cmd_experiment(eflags, kind, trials);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ReconstructionError& e) {
    std::cerr << "reconstruction failed [" << ReconstructionError::stage_name(e.stage()) << "]: " << e.what() << "\n";
    return kExitReconstruction;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
