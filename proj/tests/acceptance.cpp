// SPDX-License-Identifier: Apache-2.0
// Acceptance gate. Usage: tfphase_acceptance <criterion 1..11 | all>
// Prints one PASS/FAIL line per criterion; exit status is nonzero if any
// selected criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <sstream>
#include <string>

#include "test_support.hpp"
#include "tfphase/analysis.hpp"
#include "tfphase/experiment.hpp"
#include "tfphase/robust.hpp"

using namespace tfphase;
using namespace tfphase::testing;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::vector<double> ranks(const std::vector<double>& v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    for (std::size_t k = i; k <= j; ++k) r[idx[k]] = 0.5 * static_cast<double>(i + j) + 1.0;
    i = j + 1;
  }
  return r;
}

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  const auto ra = ranks(a), rb = ranks(b);
  const double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / ra.size();
  const double mb = std::accumulate(rb.begin(), rb.end(), 0.0) / rb.size();
  double num = 0, da = 0, db = 0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    num += (ra[i] - ma) * (rb[i] - mb);
    da += (ra[i] - ma) * (ra[i] - ma);
    db += (rb[i] - mb) * (rb[i] - mb);
  }
  return num / std::sqrt(da * db);
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

// Guarantee-mode exact recovery, shared by criteria 1 and 5.
Outcome exact_recovery(bool robust) {
  std::ostringstream msg;
  bool pass = true;
  for (int M : {16, 32, 64}) {
    int ok = 0;
    double worst_time = 0.0;
    for (std::uint64_t s = 0; s < 100; ++s) {
      const std::uint64_t seed = derive_seed(robust ? 5 : 1, Stream::kTrial, 1000 * M + s);
      Rng xr = make_rng(seed, Stream::kSignal);
      const Signal x = random_unit_signal(M, xr);
      const auto t0 = std::chrono::steady_clock::now();
      try {
        const Instance inst = make_instance(Lattice::evenly_spaced(M, 12), 144.0, seed);
        const MeasurementEnsemble ens = measure_noiseless(x, inst.frame, inst.edges);
        const Signal est = robust ? reconstruct_noisy(ens, inst.frame, inst.edges, RobustParams{}).estimate
                                  : reconstruct_noiseless(ens, inst.frame, inst.edges).estimate;
        if (global_phase_error(est, x) <= 1e-8) ++ok;
      } catch (const std::exception&) {
      }
      worst_time = std::max(worst_time, seconds_since(t0));
    }
    const bool m_ok = ok >= 99 && (M != 64 || worst_time <= 10.0);
    pass = pass && m_ok;
    msg << "M=" << M << ": " << ok << "/100 ok, max " << fmt(worst_time) << " s; ";
  }
  return {pass, msg.str()};
}

Outcome criterion1() { return exact_recovery(false); }

Outcome criterion2() {
  const MeasurementGraph fig =
      MeasurementGraph::from_edge_set(build_edge_set(Lattice({0, 3}, 6), difference_set_from({2, 3, 4}, 6)));
  const double fig_closed = spectral_gap_closed_form(difference_set_from({2, 3, 4}, 6));
  const double fig_eig = regular_spectrum(fig).gap;
  bool pass = std::abs(fig_closed - 1.0 / 3.0) <= 1e-10 && std::abs(fig_eig - 1.0 / 3.0) <= 1e-10;
  double worst = 0.0;
  for (std::uint64_t s = 0; s < 50; ++s) {
    Rng rng = make_rng(2, Stream::kTrial, s);
    const int M = std::uniform_int_distribution<int>(3, 64)(rng);
    const int K = std::uniform_int_distribution<int>(1, std::min(4, M))(rng);
    std::vector<int> all(static_cast<std::size_t>(M));
    std::iota(all.begin(), all.end(), 0);
    std::shuffle(all.begin(), all.end(), rng);
    std::vector<int> F(all.begin(), all.begin() + K);
    std::sort(F.begin(), F.end());
    const double d = std::uniform_real_distribution<double>(1.0, 6.0)(rng);
    const DifferenceSet C = sample_difference_set(M, d, derive_seed(2, Stream::kDifferenceSet, s));
    const MeasurementGraph g = MeasurementGraph::from_edge_set(build_edge_set(Lattice(F, M), C));
    worst = std::max(worst, std::abs(regular_spectrum(g).gap - spectral_gap_closed_form(C)));
  }
  pass = pass && worst <= 1e-10;
  return {pass, "six-point example closed " + fmt(fig_closed) + " eigen " + fmt(fig_eig) +
                    "; max |closed - eigen| over 50 instances " + fmt(worst)};
}

Outcome criterion3() {
  int ok = 0;
  double worst_mismatch = 0.0, min_gap = 1.0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    const std::uint64_t seed = derive_seed(3, Stream::kTrial, s);
    const DifferenceSet C = sample_difference_set(256, 144.0, seed);
    const double closed = spectral_gap_closed_form(C);
    const MeasurementGraph g = MeasurementGraph::from_edge_set(build_edge_set(Lattice::evenly_spaced(256, 2), C));
    const double eig = regular_spectrum(g).gap;
    worst_mismatch = std::max(worst_mismatch, std::abs(closed - eig));
    min_gap = std::min(min_gap, eig);
    if (eig >= 0.5) ++ok;
  }
  return {ok >= 95 && worst_mismatch <= 1e-10,
          std::to_string(ok) + "/100 with gap >= 1/2 (min " + fmt(min_gap) + ", closed/eigen mismatch " +
              fmt(worst_mismatch) + ")"};
}

Outcome criterion4() {
  double worst = 0.0;
  int undefined = 0;
  for (std::uint64_t s = 0; s < 1000; ++s) {
    const Signal x = random_signal(8, 3 * s + 40000), p = random_signal(8, 3 * s + 40001), q = random_signal(8, 3 * s + 40002);
    const cdouble ci = naive_inner(x, p), cj = naive_inner(x, q);
    std::array<double, 3> b{};
    for (int t = 0; t < 3; ++t) b[t] = std::norm(naive_inner(x, Signal(p + omega_pow(t) * q)));
    const RelativePhase r = relative_phase(std::norm(ci), std::norm(cj), b);
    if (!r.defined) {
      ++undefined;
      continue;
    }
    worst = std::max(worst, std::abs(r.value - std::conj(ci) * cj / (std::abs(ci) * std::abs(cj))));
  }
  return {undefined == 0 && worst <= 1e-12, "max deviation " + fmt(worst) + " over 1000 triples"};
}

Outcome criterion5() { return exact_recovery(true); }

RunConfig sweep_config(std::uint64_t seed, int trials) {
  RunConfig c;  // fast preset: |F| = 2, d = 3
  c.seed = seed;
  c.trials = trials;
  return c;
}

std::map<double, std::vector<ExperimentRecord>> group(const std::vector<ExperimentRecord>& rows,
                                                      const std::function<double(const ExperimentRecord&)>& key) {
  std::map<double, std::vector<ExperimentRecord>> out;
  for (const auto& r : rows) out[key(r)].push_back(r);
  return out;
}

std::vector<double> field(const std::vector<ExperimentRecord>& rows, double ExperimentRecord::*f) {
  std::vector<double> v;
  for (const auto& r : rows) v.push_back(r.status == "ok" ? r.*f : std::numeric_limits<double>::infinity());
  return v;
}

Outcome criterion6() {
  RunConfig c = sweep_config(6, 50);
  c.experiment.dims = {32, 64, 128};
  c.experiment.fixed_sigma = 1e-3;
  const auto rows = run_experiment(ExperimentKind::kDimSweep, c);
  std::vector<double> Ms, meds;
  bool bounded = true;
  std::ostringstream msg;
  for (const auto& [M, rs] : group(rows, [](const auto& r) { return r.M; })) {
    const double med = median(field(rs, &ExperimentRecord::ratio));
    Ms.push_back(M);
    meds.push_back(med);
    bounded = bounded && med <= 10.0;
    msg << "M=" << M << " median ratio " << fmt(med) << "; ";
  }
  const double rho = spearman(Ms, meds);
  msg << "Spearman rho " << fmt(rho);
  return {bounded && std::abs(rho) < 0.5, msg.str()};
}

Outcome criterion7() {
  RunConfig c = sweep_config(7, 50);
  c.experiment.noise_sweep_M = 100;
  c.experiment.sigmas = {1e-4, 2e-4, 4e-4, 8e-4};
  const auto rows = run_experiment(ExperimentKind::kNoiseSweep, c);
  std::vector<double> meds;
  std::ostringstream msg;
  for (const auto& [sigma, rs] : group(rows, [](const auto& r) { return r.sigma; })) {
    meds.push_back(median(field(rs, &ExperimentRecord::error)));
    msg << "sigma=" << fmt(sigma) << " median error " << fmt(meds.back()) << "; ";
  }
  bool pass = true;
  for (std::size_t i = 1; i < meds.size(); ++i) {
    const double step = meds[i] / meds[i - 1];
    msg << "step " << fmt(step) << " ";
    pass = pass && step >= 1.5 && step <= 3.0;
  }
  return {pass, msg.str()};
}

Outcome criterion8() {
  RunConfig c = sweep_config(8, 30);
  c.experiment.dims = {64};
  c.experiment.ds = {3, 4, 5, 6, 7, 8, 9, 10};
  const auto rows = run_experiment(ExperimentKind::kDSweep, c);
  bool pass = true;
  std::ostringstream msg;
  for (const auto& [d, rs] : group(rows, [](const auto& r) { return r.d; })) {
    const double med = median(field(rs, &ExperimentRecord::ratio));
    pass = pass && med <= 4.0;
    msg << "d=" << d << ": " << fmt(med) << "; ";
  }
  return {pass, "median ratio " + msg.str()};
}

Outcome criterion9() {
  const OrderStatsReport r = order_statistics_experiment(Lattice::evenly_spaced(64, 2), 0.5, 3.0, 3.0, 1000, 9);
  std::ostringstream msg;
  msg << "small: violation " << fmt(r.violation_small) << " (mean fraction " << fmt(r.mean_fraction_small)
      << " vs bound " << fmt(r.small_bound) << "); large: violation " << fmt(r.violation_large) << " (mean fraction "
      << fmt(r.mean_fraction_large) << " vs bound " << fmt(r.large_bound) << "); allowed " << fmt(r.allowed_violation);
  return {r.small_ok() && r.large_ok(), msg.str()};
}

Outcome criterion10() {
  std::ostringstream msg;
  std::vector<double> vals;
  for (int M : {8, 16, 32, 64}) {
    const std::uint64_t seed = derive_seed(10, Stream::kTrial, static_cast<std::uint64_t>(M));
    const GaborFrame frame(sample_window(M, seed), Lattice::evenly_spaced(M, 2));
    Rng rng = make_rng(seed, Stream::kSubsets);
    const DeltaEstimate est = delta_estimate(frame, 2.0 / 3.0, DeltaStrategy::kAuto, 200, rng);
    vals.push_back(est.value);
    msg << "M=" << M << " delta " << fmt(est.value) << (est.exhaustive ? " (exhaustive)" : "") << "; ";
  }
  const double lo = *std::min_element(vals.begin(), vals.end());
  const double hi = *std::max_element(vals.begin(), vals.end());

  const GaborFrame tiny(sample_window(3, 1010), Lattice::evenly_spaced(3, 2));
  Rng r1(1), r2(2);
  const double ex = delta_estimate(tiny, 2.0 / 3.0, DeltaStrategy::kExhaustive, 0, r1).value;
  const double smp = delta_estimate(tiny, 2.0 / 3.0, DeltaStrategy::kRandom, 200, r2).value;
  const bool agree = std::abs(ex - smp) <= 1e-12;
  msg << "max/min " << fmt(hi / lo) << "; M=3 exhaustive " << fmt(ex) << " vs sampled " << fmt(smp);
  return {lo >= 0.05 && hi / lo <= 4.0 && agree, msg.str()};
}

Outcome criterion11() {
  std::ostringstream msg;
  // core-gabor: unitarity, STFT identity, Parseval.
  int gabor_fail = 0;
  for (int M : {4, 8, 16}) {
    const Signal x = random_signal(M, 110 + M), g = random_signal(M, 120 + M);
    const GaborFrame full(g, Lattice::full(M));
    const Eigen::VectorXcd c = stft_coefficients(x, full);
    for (std::size_t i = 0; i < full.size(); ++i) {
      const auto l = full.lattice().at(i);
      if (std::abs(time_freq_shift(x, l).norm() - x.norm()) > 1e-12) ++gabor_fail;
      if (std::abs(c(static_cast<Eigen::Index>(i)) - naive_inner(x, naive_tf_shift(g, l.k, l.l))) > 1e-12) ++gabor_fail;
    }
    const double rhs = M * x.squaredNorm() * g.squaredNorm();
    if (std::abs(c.squaredNorm() - rhs) > 1e-10 * rhs) ++gabor_fail;
  }
  msg << "gabor failures " << gabor_fail << "; ";

  // robust: Hermitian sync adjacency and noiseless synchronization.
  int robust_fail = 0;
  for (std::uint64_t s = 0; s < 5; ++s) {
    const int M = 12 + 4 * static_cast<int>(s);
    const Instance inst = make_instance(Lattice::evenly_spaced(M, 2), 3.0, 1100 + s);
    const Signal x = random_signal(M, 1200 + s);
    const Eigen::VectorXcd c = stft_coefficients(x, inst.frame);
    std::vector<cdouble> w;
    for (const Edge& e : inst.edges.edges) w.push_back(std::conj(c(e.a)) * c(e.b) / std::abs(std::conj(c(e.a)) * c(e.b)));
    const MeasurementGraph full(inst.frame.size(), inst.edges.edges, {}, w);
    const MeasurementGraph g = full.restricted_to(largest_connected_component(full));
    const CMatrix A(build_sync_adjacency(g).A);
    if ((A - A.adjoint()).norm() != 0.0) ++robust_fail;
    const SyncResult r = angular_synchronization(g);
    const cdouble rot = r.phases[0] * std::conj(c(r.vertices[0]) / std::abs(c(r.vertices[0])));
    for (std::size_t i = 0; i < r.vertices.size(); ++i)
      if (std::abs(std::arg(r.phases[i] * std::conj(rot * c(r.vertices[i]) / std::abs(c(r.vertices[i]))))) > 1e-8)
        ++robust_fail;
    if (!r.dropped.empty()) ++robust_fail;
  }
  msg << "robust failures " << robust_fail << "; ";

  // graph: Cheeger sandwich (d - lambda)/2 <= h <= sqrt(2 d (d - lambda)),
  // lambda = max(|lambda_2|, |lambda_n|), on every measurement graph with
  // |V| <= 16 and 0 in F.
  int instances = 0, lower_fail = 0, upper_fail = 0, upper_fail_lambda2 = 0, upper_fail_nonbipartite_like = 0;
  for (int M = 3; M <= 16; ++M)
    for (int K = 1; K * M <= 16; ++K) {
      std::vector<int> reps;
      for (int c = 1; 2 * c <= M; ++c) reps.push_back(c);
      for (std::uint32_t fmask = 1; fmask < (1u << M); fmask += 2) {
        if (std::popcount(fmask) != K) continue;
        std::vector<int> F;
        for (int k = 0; k < M; ++k)
          if (fmask >> k & 1u) F.push_back(k);
        for (std::uint32_t cmask = 1; cmask < (1u << reps.size()); ++cmask) {
          std::vector<int> D;
          for (std::size_t i = 0; i < reps.size(); ++i)
            if (cmask >> i & 1u) D.push_back(reps[i]);
          const MeasurementGraph g =
              MeasurementGraph::from_edge_set(build_edge_set(Lattice(F, M), difference_set_from(D, M)));
          const SpectrumSummary sp = regular_spectrum(g);
          const double d = sp.degree, h = expansion_ratio(g);
          ++instances;
          if (h < (d - sp.lambda) / 2.0 - 1e-9) ++lower_fail;
          if (h > std::sqrt(2.0 * d * (d - sp.lambda)) + 1e-9) {
            ++upper_fail;
            if (std::abs(sp.lambda - sp.eigenvalues(1)) < 1e-9) ++upper_fail_nonbipartite_like;
          }
          if (h > std::sqrt(2.0 * d * std::max(0.0, d - sp.eigenvalues(1))) + 1e-9) ++upper_fail_lambda2;
        }
      }
    }
  msg << "Cheeger on " << instances << " graphs: lower fails " << lower_fail << ", upper fails " << upper_fail
      << " (all with |lambda_n| > lambda_2: " << (upper_fail_nonbipartite_like == 0 ? "yes" : "no")
      << "; with lambda_2 in the upper bound: " << upper_fail_lambda2 << " fails); ";

  // analysis/cli: byte-identical CSV for a fixed master seed.
  RunConfig c;
  c.seed = 1111;
  c.trials = 3;
  c.experiment.dims = {16, 24};
  std::ostringstream a, b;
  write_experiment_csv(a, ExperimentKind::kDimSweep, c, run_experiment(ExperimentKind::kDimSweep, c));
  write_experiment_csv(b, ExperimentKind::kDimSweep, c, run_experiment(ExperimentKind::kDimSweep, c));
  const bool csv_same = a.str() == b.str();
  msg << "CSV reproducible " << (csv_same ? "yes" : "no");

  return {gabor_fail == 0 && robust_fail == 0 && lower_fail == 0 && upper_fail == 0 && csv_same, msg.str()};
}

const std::map<int, std::pair<const char*, std::function<Outcome()>>>& criteria() {
  static const std::map<int, std::pair<const char*, std::function<Outcome()>>> table{
      {1, {"noiseless exactness", criterion1}},
      {2, {"spectral-gap formula", criterion2}},
      {3, {"Bernoulli gap bound", criterion3}},
      {4, {"polarization identity", criterion4}},
      {5, {"robust pipeline, noiseless limit", criterion5}},
      {6, {"error-to-noise ratio vs dimension", criterion6}},
      {7, {"linearity in noise", criterion7}},
      {8, {"d-sweep", criterion8}},
      {9, {"order statistics", criterion9}},
      {10, {"delta study", criterion10}},
      {11, {"property suites", criterion11}},
  };
  return table;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string which = argc > 1 ? argv[1] : "all";
  bool all_pass = true;
  for (const auto& [id, entry] : criteria()) {
    if (which != "all" && which != std::to_string(id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = entry.second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << "criterion " << id << " (" << entry.first << "): " << (o.pass ? "PASS" : "FAIL") << " | "
              << o.detail << " [" << fmt(seconds_since(t0)) << " s]" << std::endl;
    all_pass = all_pass && o.pass;
  }
  return all_pass ? 0 : 1;
}
