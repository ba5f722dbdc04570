// Copyright 2026 The qchan Authors
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

// qchan: sweep, classify, simulate, measure.
//
// Exit codes: 0 all results optimal, 1 a solver did not reach optimal
// status, 2 usage or input error, 3 I/O error.

#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "cli_support.hpp"
#include "qchan/channel_spec.hpp"
#include "qchan/results_json.hpp"
#include "qchan/tomo_sim.hpp"

namespace {

using namespace qchan;

constexpr int kExitSolver = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void emit(const std::string& path, const std::string& content) {
  try {
    cli::write_atomic(path, content);
  } catch (const std::exception& e) {
    throw IoError(e.what());
  }
}

int cmd_sweep(const std::string& grid, const std::string& measures_list, const std::string& family,
              std::uint64_t seed, const std::string& out, const std::string& format, std::size_t threads) {
  auto spec = cli::SweepSpec::with_grid(grid);
  spec.set_measures(measures_list);
  spec.family = cli::Family::parse(family);
  spec.seed = seed;
  const auto rows = cli::run_sweep(spec, threads);
  if (!cli::all_ok(rows)) {
    std::cerr << "qchan: solver did not reach optimal status; no output written\n";
    return kExitSolver;
  }
  if (format == "csv") {
    emit(out, cli::sweep_csv(rows));
    if (!out.empty() && out != "-") emit(out + ".json", cli::sweep_json(spec, rows));
  } else if (format == "json") {
    emit(out, cli::sweep_json(spec, rows));
  } else {
    emit(out, cli::sweep_svg(spec, rows));
  }
  return 0;
}

int cmd_classify(double v, const std::string& mode, const std::string& format, const std::string& out) {
  const auto h = measures::classify_depolarizing(v, mode == "computational");
  const std::string json = cli::verdict_json(h);
  if (format == "json")
    std::cout << json;
  else
    std::cout << cli::verdict_text(h);
  if (!out.empty()) emit(out, json);
  return 0;
}

int cmd_simulate(const tomo::ExperimentConfig& cfg, const std::string& out, const std::string& counts_out) {
  const auto rep = tomo::simulate(cfg);
  const std::string json = tomo::report_json(rep);
  const bool ok = rep.estimate.ok && rep.errors.failures == 0;
  if (!ok) {
    std::cerr << "qchan: pipeline did not complete with optimal status; no output written\n";
    return kExitSolver;
  }
  if (!counts_out.empty()) emit(counts_out, rep.counts.to_csv());
  emit(out, json);
  return 0;
}

int cmd_measure(const std::string& spec_arg, const std::string& name, const std::string& family, std::uint64_t seed,
                bool ns_noise, const std::string& out) {
  std::string text = spec_arg;
  if (spec_arg.empty() || (spec_arg.front() != '{' && spec_arg.front() != ' ')) {
    try {
      text = cli::read_file(spec_arg);
    } catch (const std::exception& e) {
      throw IoError(e.what());
    }
  }
  const auto e = channels::parse_channel_spec(text);
  const std::string canonical = channels::channel_spec_json(e) + "|" + name + "|" + family + "|" +
                                std::to_string(seed) + "|" + (ns_noise ? "ns" : "any");
  measures::RobustnessResult r;
  if (name == "qm") {
    r = measures::quantum_memory_robustness(e);
  } else if (name == "ts") {
    r = measures::steering_robustness(correlations::temporal_assemblage(e, channels::pauli_measurements()));
  } else if (name == "sb") {
    r = measures::non_sb_robustness(e, measures::default_sb_family(cli::Family::parse(family).random_triples, seed));
  } else if (name == "mr") {
    const auto s = channels::chsh_temporal_settings();
    const auto table = correlations::correlation_from_pdo(channels::pdo_of_channel(e), s.t0, s.t1);
    r = measures::non_macrorealism_robustness(table, measures::MacrorealismOptions{ns_noise});
  } else if (name == "f") {
    r.value = measures::temporal_negativity(channels::pdo_of_channel(e));
  } else if (name == "negativity") {
    const auto n = measures::channel_negativity(e);
    r.value = n.negativity;
    r.gap = n.gap;
    r.solver_status = n.solver_status;
  } else {
    throw CLI::ValidationError("--measure", "unknown measure '" + name + "'");
  }
  const auto rec = measures::make_record(name, measures::inputs_digest(canonical), r);
  if (!r.ok()) {
    std::cerr << "qchan: solver status " << conic::to_string(r.solver_status) << "; no output written\n";
    return kExitSolver;
  }
  emit(out, measures::to_json(rec) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qchan: quantumness measures of quantum channels"};
  app.require_subcommand(1);

  std::string out;
  std::uint64_t seed = 1;
  std::size_t threads = 0;

  auto* sweep = app.add_subcommand("sweep", "Evaluate measures of the depolarizing channel on a v grid");
  std::string grid = "0:1:21", measures_list = "all", family = "paulis3", format = "csv";
  sweep->add_option("--grid", grid, "start:stop:points")->capture_default_str();
  sweep->add_option("--measures", measures_list, "Comma list of qm,ts,mr,f,negativity or all")->capture_default_str();
  sweep->add_option("--family", family, "paulis3 or random:k")->capture_default_str();
  sweep->add_option("--seed", seed, "Seed for random measurement families")->capture_default_str();
  sweep->add_option("--out", out, "Output path ('-' for stdout)");
  sweep->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json", "svg"}))->capture_default_str();
  sweep->add_option("--threads", threads, "Worker threads (0: hardware concurrency)");

  auto* classify = app.add_subcommand("classify", "Place depolarizing(v) in the breaking hierarchy");
  double v = 1.0;
  std::string mode = "thresholds", classify_format = "text";
  classify->add_option("--v", v, "Mixing parameter")->required()->check(CLI::Range(0.0, 1.0));
  classify->add_option("--mode", mode)->check(CLI::IsMember({"thresholds", "computational"}))->capture_default_str();
  classify->add_option("--format", classify_format)->check(CLI::IsMember({"text", "json"}))->capture_default_str();
  classify->add_option("--out", out, "Also write the JSON verdict here");

  auto* simulate = app.add_subcommand("simulate", "Simulate process tomography of depolarizing(v)");
  tomo::ExperimentConfig cfg;
  std::string counts_out;
  simulate->add_option("--v", cfg.v, "Mixing parameter")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  simulate->add_option("--counts", cfg.counts_per_combo, "Expected counts per combination")->capture_default_str();
  simulate->add_option("--seed", cfg.seed)->capture_default_str();
  simulate->add_option("--trials", cfg.trials, "Monte-Carlo trials")->capture_default_str();
  simulate->add_flag("--noiseless", cfg.noiseless, "Use expected counts instead of Poisson draws");
  simulate->add_option("--instrument-noise", cfg.instrument_noise, "Extra depolarizing weight after the channel")
      ->check(CLI::Range(0.0, 1.0));
  simulate->add_option("--threads", cfg.threads, "Worker threads (0: hardware concurrency)");
  simulate->add_option("--out", out, "Report JSON path ('-' for stdout)");
  simulate->add_option("--counts-out", counts_out, "Write the sampled counts CSV here");

  auto* measure = app.add_subcommand("measure", "Evaluate one measure on a channel spec");
  std::string spec_arg, name;
  bool ns_noise = false;
  measure->add_option("--spec", spec_arg, "Channel spec JSON file or inline document")->required();
  measure->add_option("--measure", name, "qm, ts, sb, mr, f or negativity")
      ->required()
      ->check(CLI::IsMember({"qm", "ts", "sb", "mr", "f", "negativity"}));
  measure->add_option("--family", family, "paulis3 or random:k (sb only)")->capture_default_str();
  measure->add_option("--seed", seed)->capture_default_str();
  measure->add_flag("--no-signaling-noise", ns_noise, "Restrict mr noise to no-signaling tables");
  measure->add_option("--out", out, "Output path ('-' for stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*sweep) return cmd_sweep(grid, measures_list, family, seed, out, format, threads);
    if (*classify) return cmd_classify(v, mode, classify_format, out);
    if (*simulate) return cmd_simulate(cfg, out, counts_out);
    if (*measure) return cmd_measure(spec_arg, name, family, seed, ns_noise, out);
  } catch (const IoError& e) {
    std::cerr << "qchan: " << e.what() << "\n";
    return kExitIo;
  } catch (const channels::SpecError& e) {
    std::cerr << "qchan: malformed channel spec: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "qchan: " << e.what() << "\n";
    return kExitUsage;
  } catch (const CLI::Error& e) {
    std::cerr << "qchan: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "qchan: " << e.what() << "\n";
    return kExitSolver;
  }
  return 0;
}
