// SPDX-License-Identifier: Apache-2.0
#include "tfphase/config.hpp"

#include <json.hpp>

namespace tfphase {

using nlohmann::json;

const char* mode_name(Mode mode) { return mode == Mode::kNoiseless ? "noiseless" : "robust"; }

Mode parse_mode(const std::string& text) {
  if (text == "noiseless") return Mode::kNoiseless;
  if (text == "robust") return Mode::kRobust;
  throw ConfigError("unknown mode '" + text + "' (expected noiseless or robust)");
}

Lattice RunConfig::lattice() const {
  try {
    return F.empty() ? Lattice::evenly_spaced(M, K) : Lattice(F, M);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

void RunConfig::validate() const {
  if (M < 3) throw ConfigError("M must be at least 3");
  if (F.empty() && (K < 1 || K > M)) throw ConfigError("K must lie in [1, M]");
  if (!(d > 0.0)) throw ConfigError("d must be positive");
  if (!(sigma >= 0.0)) throw ConfigError("sigma must be non-negative");
  const auto in_unit = [](double v) { return v > 0.0 && v <= 1.0; };
  if (!in_unit(robust.trim.alpha) || !in_unit(robust.trim.beta)) throw ConfigError("alpha and beta must lie in (0, 1]");
  if (!(robust.tau > 0.0 && robust.tau < 1.0)) throw ConfigError("tau must lie in (0, 1)");
  if (trials < 1) throw ConfigError("trials must be at least 1");
  if (jobs < 0) throw ConfigError("jobs must be non-negative");
  const auto& g = experiment;
  if (!(g.delta_fraction > 0.0 && g.delta_fraction <= 1.0)) throw ConfigError("delta_fraction must lie in (0, 1]");
  for (int m : g.dims)
    if (m < 3) throw ConfigError("experiment dims must be at least 3");
  for (int m : g.delta_dims)
    if (m < 2) throw ConfigError("experiment delta_dims must be at least 2");
  for (double s : g.sigmas)
    if (!(s >= 0.0)) throw ConfigError("experiment sigmas must be non-negative");
  for (double v : g.ds)
    if (!(v > 0.0)) throw ConfigError("experiment ds must be positive");
  (void)lattice();
}

namespace {

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

RunConfig config_from_json(const std::string& text) {
  RunConfig c;
  try {
    const json j = json::parse(text);
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    read(j, "preset", c.preset);
    if (c.preset == "guarantee") {
      c.K = 12;
      c.d = 144.0;
    } else if (c.preset != "fast") {
      throw ConfigError("unknown preset '" + c.preset + "' (expected fast or guarantee)");
    }
    read(j, "M", c.M);
    if (j.contains("F")) {
      if (j.at("F").is_array()) {
        c.F = j.at("F").get<std::vector<int>>();
      } else {
        c.K = j.at("F").get<int>();
      }
    }
    read(j, "K", c.K);
    read(j, "d", c.d);
    read(j, "sigma", c.sigma);
    read(j, "alpha", c.robust.trim.alpha);
    read(j, "beta", c.robust.trim.beta);
    read(j, "tau", c.robust.tau);
    if (j.contains("mode")) c.mode = parse_mode(j.at("mode").get<std::string>());
    read(j, "seed", c.seed);
    read(j, "trials", c.trials);
    read(j, "output", c.output);
    read(j, "jobs", c.jobs);
    if (j.contains("experiment")) {
      const json& e = j.at("experiment");
      auto& g = c.experiment;
      read(e, "dims", g.dims);
      read(e, "sigmas", g.sigmas);
      read(e, "ds", g.ds);
      read(e, "fixed_sigma", g.fixed_sigma);
      read(e, "noise_sweep_M", g.noise_sweep_M);
      read(e, "delta_dims", g.delta_dims);
      read(e, "delta_fraction", g.delta_fraction);
      read(e, "delta_budget", g.delta_budget);
      read(e, "timing", g.timing);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return c;
}

std::string config_to_json(const RunConfig& c, int indent) {
  json j;
  j["preset"] = c.preset;
  j["M"] = c.M;
  if (c.F.empty()) {
    j["K"] = c.K;
  } else {
    j["F"] = c.F;
  }
  j["d"] = c.d;
  j["sigma"] = c.sigma;
  j["alpha"] = c.robust.trim.alpha;
  j["beta"] = c.robust.trim.beta;
  j["tau"] = c.robust.tau;
  j["mode"] = mode_name(c.mode);
  j["seed"] = c.seed;
  j["trials"] = c.trials;
  j["output"] = c.output;
  j["jobs"] = c.jobs;
  const auto& g = c.experiment;
  j["experiment"] = {{"dims", g.dims},
                     {"sigmas", g.sigmas},
                     {"ds", g.ds},
                     {"fixed_sigma", g.fixed_sigma},
                     {"noise_sweep_M", g.noise_sweep_M},
                     {"delta_dims", g.delta_dims},
                     {"delta_fraction", g.delta_fraction},
                     {"delta_budget", g.delta_budget},
                     {"timing", g.timing}};
  return j.dump(indent);
}

}  // namespace tfphase
