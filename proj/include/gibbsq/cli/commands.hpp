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

// Subcommands, output files and run manifests.

#pragma once

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gibbsq/cli/config.hpp"
#include "gibbsq/gibbs.hpp"
#include "gibbsq/markov.hpp"
#include "gibbsq/mitigation.hpp"
#include "gibbsq/native_circuit.hpp"

#ifndef GIBBSQ_VERSION
#define GIBBSQ_VERSION "unknown"
#endif

namespace gibbsq::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitRuntime = 3;

inline std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// Output directory bookkeeping; every file written is listed in the manifest.
class OutputDir {
 public:
  explicit OutputDir(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw Error("cannot create output directory '" + dir_.string() + "': " + ec.message());
  }

  std::ofstream open(const std::string& name) {
    std::ofstream os(dir_ / name, std::ios::binary);
    if (!os) throw Error("cannot write '" + (dir_ / name).string() + "'");
    files_.push_back(name);
    return os;
  }

  /// Opens a CSV and writes the schema line and column header.
  std::ofstream csv(const std::string& name, const std::vector<std::string>& columns) {
    auto os = open(name);
    os << "# schema=1\n";
    for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
    os << "\n";
    return os;
  }

  const std::vector<std::string>& files() const { return files_; }
  const std::filesystem::path& path() const { return dir_; }

 private:
  std::filesystem::path dir_;
  std::vector<std::string> files_;
};

template <class... T>
void row(std::ostream& os, const T&... v) {
  std::size_t i = 0;
  auto one = [&](const auto& x) {
    if (i++) os << ",";
    if constexpr (std::is_floating_point_v<std::decay_t<decltype(x)>>) os << num(x);
    else os << x;
  };
  (one(v), ...);
  os << "\n";
}

/// Anything thrown while turning the config into library parameters is a
/// configuration problem, reported before any computation starts.
template <class F>
auto configure(F&& f) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
}

inline void write_eigen_table(OutputDir& out, const Spectrum& s, const RealVector& exact,
                              const RealVector& sim, const RealVector& stderr_) {
  auto os = out.csv("eigen_probs.csv", {"mu", "E_mu", "p_mu_exact", "p_mu_sim", "stderr"});
  for (Index mu = 0; mu < s.size(); ++mu) {
    row(os, static_cast<long>(mu), s.values(mu), exact(mu), sim(mu), stderr_(mu));
  }
}

inline void write_records(OutputDir& out, const std::vector<RunRecord>& records) {
  auto os = out.csv("records.csv", {"sample_index", "seed", "initial_state", "accepted",
                                    "acceptance_probability", "relative_entropy", "parameters"});
  for (const auto& r : records) {
    std::string params;
    for (std::size_t i = 0; i < r.parameters.size(); ++i) params += (i ? ";" : "") + num(r.parameters[i]);
    row(os, r.sample_index, r.seed, r.initial_state, r.accepted ? 1 : 0, r.acceptance_probability,
        r.relative_entropy, params);
  }
}

inline Json cmd_exact(const RunConfig& cfg, OutputDir& out) {
  const PauliSumHamiltonian h = configure([&] {
    if (!cfg.hamiltonian) throw ConfigError("config: 'hamiltonian' section is required");
    auto built = cfg.hamiltonian->build();
    dim_of(built.qubits());
    detail::check_beta(cfg.beta);
    for (double b : cfg.beta_sweep) detail::check_beta(b);
    return built;
  });
  const Spectrum s = herm_eig(h.dense());
  const GibbsState g = exact_gibbs(s, cfg.beta);
  {
    auto os = out.open("eigenstates.csv");
    write_eigen_csv(os, g);
  }
  const std::vector<double> betas = cfg.beta_sweep.empty() ? std::vector<double>{cfg.beta} : cfg.beta_sweep;
  auto os = out.csv("energy_vs_beta.csv", {"beta", "energy", "log_partition"});
  for (double b : betas) {
    const GibbsState gb = exact_gibbs(s, b);
    row(os, b, thermal_energy(s, b), gb.log_partition);
  }
  return {{"energy", thermal_energy(s, cfg.beta)}, {"log_partition", g.log_partition}};
}

inline Json cmd_ergodic(const RunConfig& cfg, OutputDir& out) {
  const ErgodicConfig e = configure([&] { return ergodic_config(cfg); });
  const ErgodicResult r = run_ergodic(e);
  write_eigen_table(out, r.spectrum, r.exact_probs, r.eigen_probs, r.eigen_probs_stderr);
  {
    auto os = out.csv("convergence.csv", {"cycle", "trace_distance", "energy"});
    for (std::size_t k = 0; k < r.per_cycle_trace_distance.size(); ++k) {
      row(os, k + 1, r.per_cycle_trace_distance[k], r.per_cycle_energy[k]);
    }
  }
  if (e.keep_records) write_records(out, r.records);
  return {{"trace_distance", r.per_cycle_trace_distance.back()},
          {"energy", r.energy},
          {"energy_stderr", r.energy_stderr},
          {"exact_energy", r.exact_energy}};
}

inline Json cmd_universal(const RunConfig& cfg, OutputDir& out, Json& manifest) {
  const UniversalConfig base = configure([&] { return universal_config(cfg); });
  std::vector<int> depths = cfg.universal->cycles_sweep;
  for (int d : depths) {
    if (d < 1) throw ConfigError("config.universal.cycles_sweep: depths must be >= 1");
  }
  if (depths.empty()) depths.push_back(base.cycles);

  const GateSchedule sched = build_schedule(base.hamiltonian, base.undivided);
  Json order = Json::array();
  for (const auto& g : sched.gates) {
    if (const auto* t = std::get_if<PositiveTerm>(&g.generator)) {
      order.push_back({{"pauli", t->pauli.letters()}, {"sign", t->sign}, {"scale", t->scale}});
    } else {
      order.push_back({{"pauli", "dense"}});
    }
  }
  manifest["gate_order"] = order;
  manifest["shift"] = sched.shift;

  const PauliSumHamiltonian& h = base.hamiltonian;
  const double C = tail_constant(h, base.beta);
  std::optional<UniversalResult> main_run;
  Json sweep = Json::array();
  auto os = out.csv("scaling.csv", {"d", "xi", "S_mode1", "S_mode3_mean", "success_prob",
                                    "success_prob_stderr"});
  for (int d : depths) {
    UniversalConfig c = base;
    c.cycles = d;
    UniversalResult r = run_universal(c);
    std::cerr << "universal: d=" << d << " S_mode1=" << num(r.mode1_relative_entropy) << "\n";
    row(os, d, r.xi, r.mode1_relative_entropy, r.mean_realization_entropy, r.success_probability,
        r.success_probability_stderr);
    sweep.push_back({{"d", d}, {"tail_fraction_eps_0.25", tail_fraction(r.realization_entropies, r.xi, C, 0.25)},
                     {"degenerate_realizations", r.degenerate_realizations}});
    if (!r.warning.empty()) sweep.back()["warning"] = r.warning;
    if (d == base.cycles) main_run = std::move(r);
  }
  os.close();
  if (!main_run) main_run = run_universal(base);
  const UniversalResult& r = *main_run;
  write_eigen_table(out, r.spectrum, r.exact_probs, r.eigen_probs, r.eigen_probs_stderr);
  if (base.keep_records) write_records(out, r.records);

  // First cycle of realization 0 in native gates, when every term compiles.
  try {
    const std::size_t m = static_cast<std::size_t>(sched.size());
    const auto angles = draw_angles(base.seed, 0, m * static_cast<std::size_t>(base.cycles));
    const NativeCircuit circ =
        compile_cycle(sched, std::vector<double>(angles.begin(), angles.begin() + static_cast<long>(m)),
                      base.beta, base.cycles);
    auto cs = out.open("circuit.txt");
    write_circuit(cs, circ, "cycle 1 of realization 0, d = " + std::to_string(base.cycles));
  } catch (const DomainError& e) {
    manifest["circuit_skipped"] = e.what();
  }

  Json summary = {{"d", base.cycles},
                  {"mode", static_cast<int>(base.mode)},
                  {"relative_entropy_to_gibbs", r.relative_entropy_to_gibbs},
                  {"trace_distance", trace_distance(r.mode_state, exact_gibbs(r.spectrum, base.beta).rho)},
                  {"energy", r.energy},
                  {"exact_energy", r.exact_energy},
                  {"success_probability", r.success_probability},
                  {"success_probability_stderr", r.success_probability_stderr},
                  {"success_probability_predicted", success_probability_estimate(h, base.beta)},
                  {"sweep", sweep}};
  if (!r.warning.empty()) summary["warning"] = r.warning;
  return summary;
}

inline Json transition_json(const TransitionMatrix& tm, int n) {
  Json t = Json::array();
  for (Index i = 0; i < tm.size(); ++i) {
    Json rowj = Json::array();
    for (Index j = 0; j < tm.size(); ++j) rowj.push_back(tm.T(i, j));
    t.push_back(rowj);
  }
  Json e = Json::array();
  for (Index i = 0; i < tm.size(); ++i) e.push_back(tm.energies(i));
  return {{"n", n}, {"sector", tm.sector.value_or(0)}, {"beta", tm.beta}, {"Omega", tm.Omega},
          {"gamma", tm.gamma}, {"C", tm.C}, {"energies", e}, {"T", t}};
}

inline Json cmd_gap(const RunConfig& cfg, OutputDir& out) {
  const GapSection g = configure([&] {
    if (!cfg.gap) throw ConfigError("config: 'gap' section is required");
    detail::check_beta(cfg.beta);
    for (int n : cfg.gap->sizes) {
      if (n < 2 || n % 2 != 0) throw ConfigError("config.gap.sizes: half filling needs even sizes >= 2");
      dim_of(n);
    }
    return *cfg.gap;
  });
  auto os = out.csv("gap.csv", {"n", "dim_sector", "gap", "inverse_gap"});
  Json rows = Json::array();
  for (int n : g.sizes) {
    const auto h = hardcore_bose_hubbard_1d(n, g.J, g.U);
    const auto tm = build_transition_matrix(h, density_couplings(n), cfg.beta, g.Omega, g.gamma, 0);
    const GapResult r = spectral_gap(tm);
    row(os, n, static_cast<long>(tm.size()), r.gap, 1.0 / r.gap);
    std::cerr << "gap: n=" << n << " inverse_gap=" << num(1.0 / r.gap) << "\n";
    rows.push_back({{"n", n}, {"detailed_balance_residual", detailed_balance_residual(tm)}});
    if (tm.size() <= 70) {
      auto js = out.open("transition_n" + std::to_string(n) + ".json");
      js << transition_json(tm, n).dump(1) << "\n";
    }
  }
  return {{"sizes", rows}};
}

inline Json cmd_mitigate(const RunConfig& cfg, OutputDir& out) {
  const MitigationProblem problem = configure([&] {
    if (!cfg.mitigate) throw ConfigError("config: 'mitigate' section is required");
    const MitigateSection& m = *cfg.mitigate;
    MitigationProblem p;
    if (m.target == "universal") {
      p.base = UniversalMitigation{universal_config(cfg)};
    } else {
      p.base = ErgodicMitigation{ergodic_config(cfg), m.adjust_couplings};
    }
    if (m.budget < 1) throw ConfigError("config.mitigate.budget must be >= 1");
    if (!(m.initial_step > 0.0)) throw ConfigError("config.mitigate.initial_step must be positive");
    p.budget = m.budget;
    p.seed = m.optimizer_seed;
    p.initial_step = m.initial_step;
    return p;
  });
  const MitigationResult r = optimize(problem);
  {
    auto os = out.csv("trajectory.csv", {"evaluation_index", "F", "trace_distance_to_gibbs"});
    for (const auto& p : r.trajectory) row(os, p.evaluation_index, p.free_energy, p.trace_distance_to_gibbs);
  }
  {
    const RealVector before = populations(r.initial_state, r.spectrum.vectors);
    const RealVector after = populations(r.best_state, r.spectrum.vectors);
    auto os = out.csv("eigen_probs.csv", {"mu", "E_mu", "p_mu_exact", "p_mu_before", "p_mu_after"});
    for (Index mu = 0; mu < r.spectrum.size(); ++mu) {
      row(os, static_cast<long>(mu), r.spectrum.values(mu), r.exact_probs(mu), before(mu), after(mu));
    }
  }
  {
    Json params = Json::array();
    for (std::size_t i = 0; i < r.best_params.size(); ++i) {
      params.push_back({{"name", r.param_names[i]}, {"initial", r.initial_params[i]}, {"best", r.best_params[i]}});
    }
    auto os = out.open("best_params.json");
    os << Json{{"target", cfg.mitigate->target}, {"F_before", r.F_before}, {"F_after", r.F_after},
               {"F_gibbs", r.F_gibbs}, {"parameters", params}}
              .dump(2)
       << "\n";
  }
  return {{"F_before", r.F_before},
          {"F_after", r.F_after},
          {"F_gibbs", r.F_gibbs},
          {"trace_distance_before", r.trace_distance_before},
          {"trace_distance_after", r.trace_distance_after},
          {"no_improvement", r.no_improvement},
          {"evaluations", r.evaluations}};
}

struct Invocation {
  std::string subcommand;
  std::string config_path;
  std::string preset;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
};

inline std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

/// Resolves the configuration, runs one subcommand and writes its manifest.
inline int execute(const Invocation& inv, std::ostream& log = std::cerr) {
  RunConfig cfg;
  try {
    if (inv.config_path.empty() == inv.preset.empty()) {
      throw ConfigError("exactly one of --config or --preset is required");
    }
    Json j;
    if (!inv.preset.empty()) {
      j = preset_json(inv.preset);
    } else {
      LoadedConfig loaded = load_config_file(inv.config_path);
      if (loaded.manifest_subcommand && *loaded.manifest_subcommand != inv.subcommand) {
        throw ConfigError("manifest was recorded for '" + *loaded.manifest_subcommand + "', not '" +
                          inv.subcommand + "'");
      }
      j = std::move(loaded.config);
    }
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    if (inv.seed) j["seed"] = *inv.seed;
    if (inv.threads) j["threads"] = *inv.threads;
    cfg = parse_config(j);
  } catch (const Error& e) {
    log << "gibbsq: config error: " << e.what() << "\n";
    return kExitConfig;
  }

  const auto start = std::chrono::steady_clock::now();
  Json manifest;
  manifest["manifest_version"] = 1;
  manifest["subcommand"] = inv.subcommand;
  manifest["version"] = GIBBSQ_VERSION;
  manifest["seed"] = cfg.seed;
  manifest["config"] = to_json(cfg);
  try {
    OutputDir out(inv.out_dir);
    Json summary;
    if (inv.subcommand == "exact") summary = cmd_exact(cfg, out);
    else if (inv.subcommand == "ergodic") summary = cmd_ergodic(cfg, out);
    else if (inv.subcommand == "universal") summary = cmd_universal(cfg, out, manifest);
    else if (inv.subcommand == "gap") summary = cmd_gap(cfg, out);
    else if (inv.subcommand == "mitigate") summary = cmd_mitigate(cfg, out);
    else throw ConfigError("unknown subcommand '" + inv.subcommand + "'");
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    manifest["started_at"] = utc_now();
    manifest["wall_clock_seconds"] = wall;
    manifest["summary"] = summary;
    Json files = out.files();
    files.push_back("manifest.json");
    manifest["outputs"] = files;
    auto ms = out.open("manifest.json");
    ms << manifest.dump(2) << "\n";
    std::cout << summary.dump(2) << "\n";
  } catch (const ConfigError& e) {
    log << "gibbsq: config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    log << "gibbsq: error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}

inline int main(int argc, char** argv) {
  CLI::App app{"Thermal state preparation simulator"};
  app.set_version_flag("--version", std::string(GIBBSQ_VERSION));
  app.require_subcommand(1);
  Invocation inv;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"exact", "Exact Gibbs eigenstate table and energy versus beta"},
      {"ergodic", "Ergodic bath-coupling simulation"},
      {"universal", "Monitored random circuit simulation"},
      {"gap", "Spectral gap of the classical Metropolis chain versus size"},
      {"mitigate", "Free-energy minimization over circuit parameters"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", inv.config_path, "Config file or run manifest (JSON, // comments allowed)");
    sub->add_option("--preset", inv.preset, "Built-in configuration name");
    sub->add_option("--out", inv.out_dir, "Output directory")->capture_default_str();
    sub->add_option("--seed", inv.seed, "Override the config seed");
    sub->add_option("--threads", inv.threads, "Worker threads, 0 = all cores");
    sub->callback([&inv, name = name] { inv.subcommand = name; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }
  return execute(inv);
}

}  // namespace gibbsq::cli
