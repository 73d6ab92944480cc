// SPDX-License-Identifier: Apache-2.0
#include "tfphase/experiment.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <ostream>

#include <omp.h>

#include "tfphase/analysis.hpp"
#include "tfphase/io.hpp"

namespace tfphase {

Signal sample_window(int M, std::uint64_t seed) {
  Rng rng = make_rng(seed, Stream::kWindow);
  return sample_window_uniform_sphere(M, rng);
}

DifferenceSet sample_difference_set(int M, double d, std::uint64_t seed) {
  for (std::uint64_t attempt = 0; attempt < 64; ++attempt) {
    Rng rng = make_rng(seed, Stream::kDifferenceSet, attempt);
    try {
      return build_difference_set(M, d, rng);
    } catch (const EmptyDifferenceSetError&) {
    }
  }
  throw EmptyDifferenceSetError();
}

Instance make_instance(const Lattice& lattice, double d, std::uint64_t seed) {
  GaborFrame frame(sample_window(lattice.dim(), seed), lattice);
  DifferenceSet C = sample_difference_set(lattice.dim(), d, seed);
  EdgeSet edges = build_edge_set(lattice, C);
  return Instance{std::move(frame), std::move(C), std::move(edges)};
}

NoiseModel noise_for(double sigma, std::uint64_t seed) {
  if (sigma == 0.0) return NoiseModel::none();
  return NoiseModel::gaussian(sigma, derive_seed(seed, Stream::kNoise));
}

const char* experiment_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kDimSweep: return "dim-sweep";
    case ExperimentKind::kNoiseSweep: return "noise-sweep";
    case ExperimentKind::kDSweep: return "d-sweep";
    case ExperimentKind::kDeltaStudy: return "delta-study";
  }
  return "?";
}

ExperimentKind parse_experiment(const std::string& name) {
  for (auto k : {ExperimentKind::kDimSweep, ExperimentKind::kNoiseSweep, ExperimentKind::kDSweep,
                 ExperimentKind::kDeltaStudy})
    if (name == experiment_name(k)) return k;
  throw ConfigError("unknown experiment kind '" + name +
                    "' (expected dim-sweep, noise-sweep, d-sweep or delta-study)");
}

ExperimentRecord run_trial(int M, int K, double d, double sigma, Mode mode, const RobustParams& params,
                           std::uint64_t seed) {
  ExperimentRecord r;
  r.M = M;
  r.K = K;
  r.d = d;
  r.sigma = sigma;
  r.seed = seed;
  const auto start = std::chrono::steady_clock::now();
  try {
    const Instance inst = make_instance(Lattice::evenly_spaced(M, K), d, seed);
    Rng xrng = make_rng(seed, Stream::kSignal);
    const Signal x = random_unit_signal(M, xrng);
    const NoiseModel noise = noise_for(sigma, seed);
    MeasurementEnsemble ens = measure_noiseless(x, inst.frame, inst.edges);
    r.noise_norm = add_noise(ens, noise);
    if (mode == Mode::kNoiseless) {
      const NoiselessResult res = reconstruct_noiseless(ens, inst.frame, inst.edges);
      r.error = global_phase_error(res.estimate, x);
      r.surviving_vertices = res.component.size();
    } else {
      const RobustResult res = reconstruct_noisy(ens, inst.frame, inst.edges, params);
      r.error = global_phase_error(res.estimate, x);
      r.surviving_vertices = res.diagnostics.surviving_vertices;
      r.achieved_gap = res.diagnostics.achieved_gap;
      r.sigma_min = res.diagnostics.sigma_min;
    }
  } catch (const ReconstructionError& e) {
    r.status = std::string("failed:") + ReconstructionError::stage_name(e.stage());
    r.error = std::numeric_limits<double>::quiet_NaN();
  } catch (const std::exception& e) {
    r.status = "failed:setup";
    r.error = std::numeric_limits<double>::quiet_NaN();
  }
  r.ratio = r.noise_norm > 0.0 ? r.error / r.noise_norm : std::numeric_limits<double>::quiet_NaN();
  r.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return r;
}

namespace {

struct GridPoint {
  int M = 0;
  double d = 0.0;
  double sigma = 0.0;
};

std::vector<GridPoint> grid_for(ExperimentKind kind, const RunConfig& c) {
  const auto& g = c.experiment;
  std::vector<GridPoint> pts;
  switch (kind) {
    case ExperimentKind::kDimSweep:
      for (int m : g.dims) pts.push_back({m, c.d, g.fixed_sigma});
      break;
    case ExperimentKind::kNoiseSweep:
      for (double s : g.sigmas) pts.push_back({g.noise_sweep_M, c.d, s});
      break;
    case ExperimentKind::kDSweep:
      for (int m : g.dims)
        for (double d : g.ds) pts.push_back({m, d, g.fixed_sigma});
      break;
    case ExperimentKind::kDeltaStudy:
      for (int m : g.delta_dims) pts.push_back({m, 0.0, 0.0});
      break;
  }
  return pts;
}

int shifts_for(const RunConfig& c, int M) {
  const int K = c.F.empty() ? c.K : static_cast<int>(c.F.size());
  if (K > M) throw ConfigError("experiment needs |F| <= M for every grid dimension");
  return K;
}

ExperimentRecord run_delta(int M, int K, const RunConfig& c, std::uint64_t seed) {
  ExperimentRecord r;
  r.M = M;
  r.K = K;
  r.seed = seed;
  const auto start = std::chrono::steady_clock::now();
  try {
    const GaborFrame frame(sample_window(M, seed), Lattice::evenly_spaced(M, K));
    Rng rng = make_rng(seed, Stream::kSubsets);
    const DeltaEstimate est = delta_estimate(frame, c.experiment.delta_fraction, DeltaStrategy::kAuto,
                                             c.experiment.delta_budget, rng);
    r.delta = est.value;
    r.keep = est.keep;
    r.subsets_evaluated = est.subsets_evaluated;
  } catch (const std::exception&) {
    r.status = "failed:delta";
    r.delta = std::numeric_limits<double>::quiet_NaN();
  }
  r.error = std::numeric_limits<double>::quiet_NaN();
  r.ratio = std::numeric_limits<double>::quiet_NaN();
  r.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace

std::vector<ExperimentRecord> run_experiment(ExperimentKind kind, const RunConfig& config, std::ostream* progress) {
  config.validate();
  const std::vector<GridPoint> pts = grid_for(kind, config);
  for (const auto& p : pts) (void)shifts_for(config, p.M);
  const std::size_t trials = static_cast<std::size_t>(config.trials);
  const std::size_t total = pts.size() * trials;
  std::vector<ExperimentRecord> out(total);
  const int threads = config.jobs > 0 ? config.jobs : omp_get_max_threads();
  const auto kind_tag = static_cast<std::uint64_t>(kind) << 32;
  std::size_t done = 0;

#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (std::size_t i = 0; i < total; ++i) {
    const GridPoint& p = pts[i / trials];
    const auto trial = static_cast<int>(i % trials);
    const std::uint64_t seed = derive_seed(config.seed, Stream::kTrial, kind_tag | static_cast<std::uint64_t>(trial));
    const int K = shifts_for(config, p.M);
    ExperimentRecord r = kind == ExperimentKind::kDeltaStudy
                             ? run_delta(p.M, K, config, seed)
                             : run_trial(p.M, K, p.d, p.sigma, config.mode, config.robust, seed);
    r.kind = kind;
    r.trial = trial;
    out[i] = std::move(r);
#pragma omp critical(experiment_progress)
    {
      ++done;
      if (progress != nullptr)
        *progress << experiment_name(kind) << ": " << done << "/" << total << " (M=" << p.M << ", trial " << trial
                  << ") " << out[i].status << "\n"
                  << std::flush;
    }
  }
  return out;
}

void write_experiment_csv(std::ostream& out, ExperimentKind kind, const RunConfig& config,
                          const std::vector<ExperimentRecord>& records) {
  const bool timing = config.experiment.timing;
  out << "# " << experiment_name(kind) << " " << config_to_json(config) << "\n";
  if (kind == ExperimentKind::kDeltaStudy) {
    out << "kind,trial,M,K,seed,fraction,keep,delta,subsets_evaluated,status" << (timing ? ",runtime_ms" : "") << "\n";
    for (const auto& r : records) {
      out << experiment_name(r.kind) << ',' << r.trial << ',' << r.M << ',' << r.K << ',' << r.seed << ','
          << format_double(config.experiment.delta_fraction) << ',' << r.keep << ',' << format_double(r.delta) << ','
          << r.subsets_evaluated << ',' << r.status;
      if (timing) out << ',' << format_double(r.runtime_ms);
      out << "\n";
    }
    return;
  }
  out << "kind,trial,M,K,d,sigma,mode,seed,error,noise_norm,ratio,status,surviving_vertices,achieved_gap,sigma_min"
      << (timing ? ",runtime_ms" : "") << "\n";
  for (const auto& r : records) {
    out << experiment_name(r.kind) << ',' << r.trial << ',' << r.M << ',' << r.K << ',' << format_double(r.d) << ','
        << format_double(r.sigma) << ',' << mode_name(config.mode) << ',' << r.seed << ',' << format_double(r.error)
        << ',' << format_double(r.noise_norm) << ',' << format_double(r.ratio) << ',' << r.status << ','
        << r.surviving_vertices << ',' << format_double(r.achieved_gap) << ',' << format_double(r.sigma_min);
    if (timing) out << ',' << format_double(r.runtime_ms);
    out << "\n";
  }
}

}  // namespace tfphase
