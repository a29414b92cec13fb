// Copyright 2026 The gibbsq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Run configuration: JSON with // comments, strict schema, presets.

#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include <json.hpp>

#include "gibbsq/ergodic.hpp"
#include "gibbsq/hamiltonian.hpp"
#include "gibbsq/universal.hpp"

namespace gibbsq::cli {

using Json = nlohmann::ordered_json;

/// Malformed or schema-invalid configuration (exit code 2).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Reads one JSON object, remembering which keys were consumed so that
/// anything left over can be reported as unknown.
class Reader {
 public:
  Reader(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(where() + " must be an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  template <class T>
  T get(const std::string& key, const T& fallback) {
    used_.insert(key);
    if (!j_.contains(key)) return fallback;
    return convert<T>(key);
  }

  template <class T>
  T require(const std::string& key) {
    used_.insert(key);
    if (!j_.contains(key)) throw ConfigError(where() + ": missing required key '" + key + "'");
    return convert<T>(key);
  }

  Reader child(const std::string& key) {
    used_.insert(key);
    return Reader(j_.at(key), path_ + "." + key);
  }

  const Json& raw(const std::string& key) {
    used_.insert(key);
    return j_.at(key);
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!used_.count(it.key())) throw ConfigError(where() + ": unknown key '" + it.key() + "'");
    }
  }

  std::string where() const { return path_; }

 private:
  template <class T>
  T convert(const std::string& key) const {
    const Json& v = j_.at(key);
    try {
      if constexpr (std::is_same_v<T, bool>) {
        if (!v.is_boolean()) throw ConfigError("");
      } else if constexpr (std::is_unsigned_v<T>) {
        if (!v.is_number_unsigned()) throw ConfigError("");
      } else if constexpr (std::is_integral_v<T>) {
        if (!v.is_number_integer()) throw ConfigError("");
      } else if constexpr (std::is_floating_point_v<T>) {
        if (!v.is_number()) throw ConfigError("");
      } else if constexpr (std::is_same_v<T, std::string>) {
        if (!v.is_string()) throw ConfigError("");
      }
      return v.get<T>();
    } catch (const std::exception&) {
      throw ConfigError(where() + "." + key + ": wrong type (got " + v.dump() + ")");
    }
  }

  const Json& j_;
  std::string path_;
  std::set<std::string> used_;
};

struct HamiltonianSpec {
  std::string model = "bose_hubbard_chain";
  int sites = 4;
  double J = 1.0, U = 1.0, t = 0.0, h = 0.0;
  std::vector<std::pair<int, int>> edges;
  std::vector<std::pair<std::string, double>> terms;  // pauli_sum model

  PauliSumHamiltonian build() const {
    if (model == "bose_hubbard_chain") return hardcore_bose_hubbard_1d(sites, J, U);
    if (model == "bose_hubbard_graph") return hardcore_bose_hubbard(sites, edges, J, U);
    if (model == "heisenberg_like_chain") return heisenberg_like_1d(sites, t, U, h);
    PauliSumHamiltonian out(sites);
    for (const auto& [p, c] : terms) {
      if (static_cast<int>(p.size()) != sites) {
        throw ConfigError("hamiltonian.terms: string '" + p + "' does not have " + std::to_string(sites) + " letters");
      }
      out.add(c, PauliString(p));
    }
    return out;
  }
};

struct ErgodicSection {
  int n_ancilla = 1;
  double lambda = 0.1, gamma = 0.1, Omega = 1.0;
  int cycles = 20;
  int samples = 1000;
  double noise_rate = 0.0;
  std::vector<int> ancilla_map;
  std::string lambda_schedule = "constant";
  bool keep_records = false;
};

struct UniversalSection {
  int cycles = 5;
  std::vector<int> cycles_sweep;
  int mode = 1;
  int samples = 1000;
  double p2 = 0.0, p3 = 0.0;
  bool undivided = false;
  bool keep_records = false;
};

struct GapSection {
  std::vector<int> sizes{4, 6, 8, 10};
  double J = 1.0, U = 0.1, Omega = 1.0, gamma = 0.1;
};

struct MitigateSection {
  std::string target = "universal";
  int budget = 500;
  double initial_step = 0.5;
  bool adjust_couplings = false;
  std::uint64_t optimizer_seed = 1;
};

struct RunConfig {
  std::optional<HamiltonianSpec> hamiltonian;
  double beta = 1.0;
  std::vector<double> beta_sweep;
  std::optional<ErgodicSection> ergodic;
  std::optional<UniversalSection> universal;
  std::optional<GapSection> gap;
  std::optional<MitigateSection> mitigate;
  std::uint64_t seed = 1;
  unsigned threads = 0;
};

inline HamiltonianSpec parse_hamiltonian(Reader r) {
  HamiltonianSpec s;
  s.model = r.require<std::string>("model");
  if (s.model == "bose_hubbard_chain") {
    s.sites = r.require<int>("sites");
    s.J = r.get("J", 1.0);
    s.U = r.get("U", 1.0);
  } else if (s.model == "bose_hubbard_graph") {
    s.sites = r.require<int>("sites");
    s.J = r.get("J", 1.0);
    s.U = r.get("U", 1.0);
    for (const auto& e : r.raw("edges")) {
      if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer()) {
        throw ConfigError(r.where() + ".edges: each edge must be [i, j]");
      }
      s.edges.emplace_back(e[0].get<int>(), e[1].get<int>());
    }
  } else if (s.model == "heisenberg_like_chain") {
    s.sites = r.require<int>("sites");
    s.t = r.require<double>("t");
    s.U = r.require<double>("U");
    s.h = r.require<double>("h");
  } else if (s.model == "pauli_sum") {
    s.sites = r.require<int>("qubits");
    for (const auto& item : r.raw("terms")) {
      Reader t(item, r.where() + ".terms[]");
      s.terms.emplace_back(t.require<std::string>("pauli"), t.require<double>("coefficient"));
      t.finish();
    }
  } else {
    throw ConfigError(r.where() + ".model: unknown model '" + s.model +
                      "' (expected bose_hubbard_chain, bose_hubbard_graph, heisenberg_like_chain, pauli_sum)");
  }
  r.finish();
  return s;
}

inline Json to_json(const HamiltonianSpec& s) {
  Json j;
  j["model"] = s.model;
  if (s.model == "pauli_sum") {
    j["qubits"] = s.sites;
    j["terms"] = Json::array();
    for (const auto& [p, c] : s.terms) j["terms"].push_back({{"pauli", p}, {"coefficient", c}});
    return j;
  }
  j["sites"] = s.sites;
  if (s.model == "heisenberg_like_chain") {
    j["t"] = s.t;
    j["U"] = s.U;
    j["h"] = s.h;
    return j;
  }
  j["J"] = s.J;
  j["U"] = s.U;
  if (s.model == "bose_hubbard_graph") {
    j["edges"] = Json::array();
    for (const auto& [a, b] : s.edges) j["edges"].push_back({a, b});
  }
  return j;
}

template <class T>
std::vector<T> read_list(Reader& r, const std::string& key, const std::vector<T>& fallback) {
  if (!r.has(key)) return fallback;
  const Json& v = r.raw(key);
  if (!v.is_array()) throw ConfigError(r.where() + "." + key + " must be a list");
  std::vector<T> out;
  for (const auto& x : v) {
    if constexpr (std::is_integral_v<T>) {
      if (!x.is_number_integer()) throw ConfigError(r.where() + "." + key + ": expected integers");
    } else {
      if (!x.is_number()) throw ConfigError(r.where() + "." + key + ": expected numbers");
    }
    out.push_back(x.get<T>());
  }
  return out;
}

inline RunConfig parse_config(const Json& j) {
  RunConfig c;
  Reader r(j, "config");
  if (r.has("hamiltonian")) c.hamiltonian = parse_hamiltonian(r.child("hamiltonian"));
  c.beta = r.get("beta", 1.0);
  c.beta_sweep = read_list<double>(r, "beta_sweep", {});
  if (r.has("beta_sweep") && c.beta_sweep.empty()) throw ConfigError("config.beta_sweep: empty sweep list");
  c.seed = r.get<std::uint64_t>("seed", 1);
  c.threads = r.get<unsigned>("threads", 0);
  if (r.has("ergodic")) {
    Reader e = r.child("ergodic");
    ErgodicSection s;
    s.n_ancilla = e.get("n_ancilla", s.n_ancilla);
    s.lambda = e.get("lambda", s.lambda);
    s.gamma = e.get("gamma", s.gamma);
    s.Omega = e.get("Omega", s.Omega);
    s.cycles = e.get("cycles", s.cycles);
    s.samples = e.get("samples", s.samples);
    s.noise_rate = e.get("noise_rate", s.noise_rate);
    s.ancilla_map = read_list<int>(e, "ancilla_map", {});
    s.lambda_schedule = e.get("lambda_schedule", s.lambda_schedule);
    if (s.lambda_schedule != "constant" && s.lambda_schedule != "linear-decay") {
      throw ConfigError("config.ergodic.lambda_schedule must be 'constant' or 'linear-decay'");
    }
    s.keep_records = e.get("keep_records", s.keep_records);
    e.finish();
    c.ergodic = s;
  }
  if (r.has("universal")) {
    Reader u = r.child("universal");
    UniversalSection s;
    s.cycles = u.get("cycles", s.cycles);
    s.cycles_sweep = read_list<int>(u, "cycles_sweep", {});
    if (u.has("cycles_sweep") && s.cycles_sweep.empty()) {
      throw ConfigError("config.universal.cycles_sweep: empty sweep list");
    }
    s.mode = u.get("mode", s.mode);
    if (s.mode < 1 || s.mode > 3) throw ConfigError("config.universal.mode must be 1, 2 or 3");
    s.samples = u.get("samples", s.samples);
    s.p2 = u.get("p2", s.p2);
    s.p3 = u.get("p3", s.p3);
    s.undivided = u.get("undivided", s.undivided);
    s.keep_records = u.get("keep_records", s.keep_records);
    u.finish();
    c.universal = s;
  }
  if (r.has("gap")) {
    Reader g = r.child("gap");
    GapSection s;
    s.sizes = read_list<int>(g, "sizes", s.sizes);
    if (s.sizes.empty()) throw ConfigError("config.gap.sizes: empty sweep list");
    s.J = g.get("J", s.J);
    s.U = g.get("U", s.U);
    s.Omega = g.get("Omega", s.Omega);
    s.gamma = g.get("gamma", s.gamma);
    g.finish();
    c.gap = s;
  }
  if (r.has("mitigate")) {
    Reader m = r.child("mitigate");
    MitigateSection s;
    s.target = m.get("target", s.target);
    if (s.target != "universal" && s.target != "ergodic") {
      throw ConfigError("config.mitigate.target must be 'universal' or 'ergodic'");
    }
    s.budget = m.get("budget", s.budget);
    s.initial_step = m.get("initial_step", s.initial_step);
    s.adjust_couplings = m.get("adjust_couplings", s.adjust_couplings);
    s.optimizer_seed = m.get("optimizer_seed", s.optimizer_seed);
    m.finish();
    c.mitigate = s;
  }
  r.finish();
  return c;
}

/// Fully resolved configuration, defaults included.
inline Json to_json(const RunConfig& c) {
  Json j;
  if (c.hamiltonian) j["hamiltonian"] = to_json(*c.hamiltonian);
  j["beta"] = c.beta;
  if (!c.beta_sweep.empty()) j["beta_sweep"] = c.beta_sweep;
  j["seed"] = c.seed;
  j["threads"] = c.threads;
  if (c.ergodic) {
    const auto& s = *c.ergodic;
    j["ergodic"] = {{"n_ancilla", s.n_ancilla}, {"lambda", s.lambda}, {"gamma", s.gamma},
                    {"Omega", s.Omega}, {"cycles", s.cycles}, {"samples", s.samples},
                    {"noise_rate", s.noise_rate}, {"ancilla_map", s.ancilla_map},
                    {"lambda_schedule", s.lambda_schedule}, {"keep_records", s.keep_records}};
  }
  if (c.universal) {
    const auto& s = *c.universal;
    j["universal"] = {{"cycles", s.cycles}, {"mode", s.mode}, {"samples", s.samples},
                      {"p2", s.p2}, {"p3", s.p3}, {"undivided", s.undivided},
                      {"keep_records", s.keep_records}};
    if (!s.cycles_sweep.empty()) j["universal"]["cycles_sweep"] = s.cycles_sweep;
  }
  if (c.gap) {
    const auto& s = *c.gap;
    j["gap"] = {{"sizes", s.sizes}, {"J", s.J}, {"U", s.U}, {"Omega", s.Omega}, {"gamma", s.gamma}};
  }
  if (c.mitigate) {
    const auto& s = *c.mitigate;
    j["mitigate"] = {{"target", s.target}, {"budget", s.budget}, {"initial_step", s.initial_step},
                     {"adjust_couplings", s.adjust_couplings}, {"optimizer_seed", s.optimizer_seed}};
  }
  return j;
}

inline ErgodicConfig ergodic_config(const RunConfig& c) {
  if (!c.hamiltonian) throw ConfigError("config: 'hamiltonian' section is required");
  if (!c.ergodic) throw ConfigError("config: 'ergodic' section is required");
  const auto& s = *c.ergodic;
  ErgodicConfig e;
  e.hamiltonian = c.hamiltonian->build();
  e.n_ancilla = s.n_ancilla;
  e.beta = c.beta;
  e.lambda = s.lambda;
  e.gamma = s.gamma;
  e.omega = s.Omega;
  e.cycles = s.cycles;
  e.samples = s.samples;
  e.seed = c.seed;
  e.noise_rate = s.noise_rate;
  e.ancilla_map = s.ancilla_map;
  e.schedule = s.lambda_schedule == "linear-decay" ? LambdaSchedule::kLinearDecay : LambdaSchedule::kConstant;
  e.threads = c.threads;
  e.keep_records = s.keep_records;
  e.validate();
  return e;
}

inline UniversalConfig universal_config(const RunConfig& c, std::optional<int> cycles = std::nullopt) {
  if (!c.hamiltonian) throw ConfigError("config: 'hamiltonian' section is required");
  if (!c.universal) throw ConfigError("config: 'universal' section is required");
  const auto& s = *c.universal;
  UniversalConfig u;
  u.hamiltonian = c.hamiltonian->build();
  u.beta = c.beta;
  u.cycles = cycles.value_or(s.cycles);
  u.mode = static_cast<Mode>(s.mode);
  u.samples = s.samples;
  u.seed = c.seed;
  u.noise = {s.p2, s.p3};
  u.undivided = s.undivided;
  u.threads = c.threads;
  u.keep_records = s.keep_records;
  u.validate();
  return u;
}

/// Named configurations carrying the published experiment parameters.
inline const std::map<std::string, std::string>& preset_texts() {
  static const std::map<std::string, std::string> presets = {
      {"fig2", R"({
        "hamiltonian": {"model": "bose_hubbard_chain", "sites": 4, "J": 1.0, "U": 1.0},
        "beta": 1.0,
        "beta_sweep": [0.0, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 2.5, 3.0, 4.0, 5.0]
      })"},
      {"fig1c", R"({
        "beta": 1.0,
        "gap": {"sizes": [2, 4, 6, 8, 10], "J": 1.0, "U": 0.1, "Omega": 1.0, "gamma": 0.1}
      })"},
      {"fig2-ergodic", R"({
        "hamiltonian": {"model": "bose_hubbard_chain", "sites": 4, "J": 1.0, "U": 1.0},
        "beta": 1.0,
        "seed": 1,
        "ergodic": {"n_ancilla": 3, "lambda": 0.1, "gamma": 0.1, "Omega": 4.0,
                    "cycles": 20, "samples": 1000, "noise_rate": 0.0}
      })"},
      {"fig2-universal", R"({
        "hamiltonian": {"model": "bose_hubbard_chain", "sites": 4, "J": 1.0, "U": 1.0},
        "beta": 1.0,
        "seed": 1,
        "universal": {"cycles": 5, "mode": 1, "samples": 1000, "p2": 0.0, "p3": 0.0}
      })"},
      {"fig2-universal-noisy", R"({
        "hamiltonian": {"model": "bose_hubbard_chain", "sites": 4, "J": 1.0, "U": 1.0},
        "beta": 1.0,
        "seed": 1,
        "universal": {"cycles": 5, "mode": 1, "samples": 1000, "p2": 0.01, "p3": 0.02}
      })"},
      {"fig2-mitigate", R"({
        "hamiltonian": {"model": "bose_hubbard_chain", "sites": 4, "J": 1.0, "U": 1.0},
        "beta": 1.0,
        "seed": 1,
        "universal": {"cycles": 5, "mode": 3, "samples": 1, "p2": 0.01, "p3": 0.02},
        "mitigate": {"target": "universal", "budget": 2000, "initial_step": 0.5}
      })"},
      {"figs3", R"({
        "hamiltonian": {"model": "heisenberg_like_chain", "sites": 3, "t": -2.0, "U": 4.0, "h": -1.0},
        "beta": 1.0,
        "beta_sweep": [0.0, 0.25, 0.5, 0.75, 1.0, 1.5, 2.0, 2.5, 3.0, 4.0, 5.0],
        "seed": 1,
        "universal": {"cycles": 5, "mode": 1, "samples": 1000, "p2": 0.01, "p3": 0.02},
        "ergodic": {"n_ancilla": 2, "lambda": 0.1, "gamma": 0.1, "Omega": 4.0,
                    "cycles": 20, "samples": 1000, "noise_rate": 0.001},
        "mitigate": {"target": "universal", "budget": 2000, "initial_step": 0.5}
      })"},
      {"fig2d", R"({
        "hamiltonian": {"model": "pauli_sum", "qubits": 2,
                        "terms": [{"pauli": "XX", "coefficient": 1.0},
                                  {"pauli": "ZI", "coefficient": -1.0},
                                  {"pauli": "IZ", "coefficient": -1.0}]},
        "beta": 1.0,
        "seed": 1,
        "universal": {"cycles": 5, "cycles_sweep": [4, 8, 16, 32, 64], "mode": 1, "samples": 2000}
      })"},
  };
  return presets;
}

inline Json parse_json_text(const std::string& text, const std::string& origin) {
  try {
    return Json::parse(text, nullptr, true, /*ignore_comments=*/true);
  } catch (const Json::parse_error& e) {
    throw ConfigError(origin + ": " + e.what());
  }
}

inline Json preset_json(const std::string& name) {
  const auto& p = preset_texts();
  const auto it = p.find(name);
  if (it == p.end()) {
    std::string known;
    for (const auto& [k, v] : p) known += (known.empty() ? "" : ", ") + k;
    throw ConfigError("unknown preset '" + name + "' (known: " + known + ")");
  }
  return parse_json_text(it->second, "preset " + name);
}

struct LoadedConfig {
  Json config;
  std::optional<std::string> manifest_subcommand;
};

/// A config file, or a run manifest whose "config" entry is replayed.
inline LoadedConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  Json j = parse_json_text(ss.str(), path);
  if (j.is_object() && j.contains("manifest_version")) {
    if (!j.contains("config") || !j.contains("subcommand")) {
      throw ConfigError(path + ": manifest lacks 'config' or 'subcommand'");
    }
    return {j.at("config"), j.at("subcommand").get<std::string>()};
  }
  return {j, std::nullopt};
}

}  // namespace gibbsq::cli
