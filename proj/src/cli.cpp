// Copyright 2026 The privkf Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "privkf/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "privkf/errors.hpp"
#include "privkf/privacy.hpp"
#include "privkf/protocol1.hpp"
#include "privkf/protocol2.hpp"
#include "privkf/report.hpp"
#include "privkf/scenario.hpp"

namespace privkf {
namespace {

namespace fs = std::filesystem;

struct Overrides {
  std::optional<int> steps;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> key_bits;
  bool literal = false;
};

void add_overrides(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--steps", o.steps, "Number of filter steps")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", o.seed,
                  "Base seed: plant noise uses it, crypto seed+1, simulator seed+2");
  cmd->add_option("--key-bits", o.key_bits, "Paillier modulus size in bits");
}

void apply(Scenario& s, const Overrides& o) {
  if (o.steps) s.steps = *o.steps;
  if (o.seed) s.seeds = Seeds{*o.seed, *o.seed + 1, *o.seed + 2};
  if (o.key_bits) s.key_bits = *o.key_bits;
  if (o.literal) s.refresh = false;
  s.validate();
}

RunResult execute(Protocol protocol, const Scenario& s) {
  return protocol == Protocol::kSensorFusion ? protocol1::run_protocol1(s)
                                             : protocol2::run_protocol2(s);
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
  out.flush();
  if (!out) throw ValidationError("cannot write " + path.string());
}

int cmd_run(Protocol protocol, const std::string& scenario_path, const Overrides& o,
            const fs::path& out_dir) {
  Scenario s = load_scenario(scenario_path);
  apply(s, o);
  const RunResult run = execute(protocol, s);
  const auto metrics = report::compute_metrics(run);
  report::emit_reports(run, metrics, out_dir);
  report::write_transcripts(run, out_dir);
  report::save_run(run, out_dir / "run.json");
  std::cout << report::timing_report(run, metrics);
  std::cout << "wrote " << (out_dir / "estimates.csv").string() << '\n';
  return 0;
}

int cmd_attack(const std::string& run_path, const std::string& scenario_path, int protocol,
               const Overrides& o, const std::string& coalition, int step, fs::path out_dir) {
  RunResult run;
  if (!run_path.empty()) {
    run = report::load_run(run_path);
    if (out_dir.empty()) out_dir = fs::path(run_path).parent_path();
  } else {
    Scenario s = load_scenario(scenario_path);
    apply(s, o);
    run = execute(static_cast<Protocol>(protocol), s);
  }
  if (out_dir.empty()) out_dir = ".";
  const auto spec = privacy::parse_coalition(coalition);
  const auto rep = privacy::attack(run, spec, step);
  fs::create_directories(out_dir);
  write_text(out_dir / "attack.txt", rep.to_text());
  write_text(out_dir / "attack.csv", privacy::AttackReport::csv_header() + "\n" +
                                         rep.to_csv_row() + "\n");
  std::cout << rep.to_text();
  return 0;
}

Scenario bench_scenario() {
  Scenario s = constant_velocity_scenario(6, 0.01, 1.0, {0.01});
  s.name = "bench";
  s.groups = {{0, 1}, {2, 3}, {4, 5}};
  s.steps = 3;
  return s;
}

int cmd_bench(const std::string& scenario_path, const Overrides& o,
              std::vector<unsigned> key_sizes, const fs::path& out_dir) {
  Scenario base = scenario_path.empty() ? bench_scenario() : load_scenario(scenario_path);
  if (key_sizes.empty()) key_sizes = {512, 1024, 2048};
  fs::create_directories(out_dir);
  const fs::path path = out_dir / "bench.csv";
  std::ofstream out(path);
  out << "scenario,protocol,key_bits,steps,role,mean_ms,published_reference_ms\n";
  for (unsigned bits : key_sizes) {
    Scenario s = base;
    Overrides with_bits = o;
    with_bits.key_bits = bits;
    apply(s, with_bits);
    for (Protocol protocol : {Protocol::kSensorFusion, Protocol::kGroupDiffusion}) {
      if (protocol == Protocol::kGroupDiffusion && !s.grouped()) continue;
      const RunResult run = execute(protocol, s);
      const auto ref = report::reference_times(protocol);
      for (const auto& [role, ms] : mean_step_ms(run)) {
        const double reference = role == Role::kAggregator ? ref.aggregator
                                 : role == Role::kQuery    ? ref.query
                                                           : ref.sensor_side;
        char line[256];
        std::snprintf(line, sizeof(line), "%s,%s,%u,%d,%s,%.12g,%.12g\n", s.name.c_str(),
                      to_string(protocol).c_str(), bits, s.steps, to_string(role).c_str(), ms,
                      reference);
        out << line;
        std::cout << line;
      }
    }
  }
  out.flush();
  if (!out) throw ValidationError("cannot write " + path.string());
  return 0;
}

int cmd_gen(int sensors, int groups, double dt, const Overrides& o, const fs::path& out_dir) {
  if (sensors < 1) throw ValidationError("--sensors must be at least 1");
  if (groups < 0 || groups > sensors) throw ValidationError("--groups must be in [0, sensors]");
  Scenario s = constant_velocity_scenario(sensors, dt, 1.0, {0.01});
  s.name = "generated";
  for (int j = 0; j < groups; ++j) {
    auto& g = s.groups.emplace_back();
    for (int i = j; i < sensors; i += groups) g.push_back(i);
  }
  apply(s, o);
  // One extra row so group-diffusion runs have x_{K+1} to score against.
  const RunData data = prepare_run_data(s, s.steps + 1);
  TrajectoryCsv csv;
  for (std::size_t k = 0; k < data.measurements.size(); ++k) {
    csv.times.push_back(dt * static_cast<double>(k + 1));
  }
  csv.truth = data.truth;
  csv.measurements = data.measurements;
  fs::create_directories(out_dir);
  export_trajectory_csv(out_dir / "trajectory.csv", csv);
  s.source = DataSource::kCsv;
  s.csv_path = "trajectory.csv";
  save_scenario(s, out_dir / "scenario.json");
  std::cout << "wrote " << (out_dir / "scenario.json").string() << " and "
            << (out_dir / "trajectory.csv").string() << '\n';
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Privacy-preserving multi-party Kalman filtering over Paillier encryption"};
  app.require_subcommand(1);

  Overrides o;
  std::string scenario_path;
  std::string out_dir = "out";

  auto* run1 = app.add_subcommand("run1", "Run the encrypted sensor-fusion protocol");
  auto* run2 = app.add_subcommand("run2", "Run the encrypted group-diffusion protocol");
  for (auto* cmd : {run1, run2}) {
    cmd->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
    add_overrides(cmd, o);
    cmd->add_option("--out-dir", out_dir, "Output directory")->capture_default_str();
  }
  run1->add_flag("--literal-paper-mode", o.literal,
                 "Skip the query's re-encryption round so the estimate exponent grows "
                 "every step until the key's budget is exhausted");

  std::string run_path;
  std::string coalition;
  int attack_step = 0;
  int protocol = 1;
  std::string attack_out;
  auto* attack = app.add_subcommand("attack", "Solve a query coalition's attack system");
  auto* run_opt = attack->add_option("--run", run_path, "run.json written by run1 or run2");
  auto* scen_opt = attack->add_option("--scenario", scenario_path,
                                      "Scenario to run first when no --run is given");
  run_opt->excludes(scen_opt);
  attack->add_option("--protocol", protocol, "Protocol for --scenario (1 or 2)")
      ->check(CLI::IsMember({1, 2}));
  attack->add_option("--coalition", coalition, "e.g. kind=query,members=1,2")->required();
  attack->add_option("--step", attack_step, "Step to attack (default: last)")
      ->check(CLI::NonNegativeNumber);
  attack->add_option("--out-dir", attack_out, "Output directory (default: next to --run)");
  add_overrides(attack, o);

  std::vector<unsigned> key_sizes;
  auto* bench = app.add_subcommand("bench", "Time both protocols over key sizes");
  bench->add_option("--scenario", scenario_path, "Scenario JSON (default: 6 sensors, 3 groups)");
  bench->add_option("--key-bits", key_sizes, "Key sizes to sweep (default: 512 1024 2048)");
  bench->add_option("--steps", o.steps, "Number of filter steps")->check(CLI::PositiveNumber);
  bench->add_option("--seed", o.seed, "Base seed");
  bench->add_option("--out-dir", out_dir, "Output directory")->capture_default_str();

  int sensors = 4;
  int groups = 0;
  double dt = 0.01;
  auto* gen = app.add_subcommand("gen", "Write a constant-velocity scenario and trajectory CSV");
  gen->add_option("--sensors", sensors, "Number of sensors")->capture_default_str();
  gen->add_option("--groups", groups, "Number of sensor groups (0 for none)")->capture_default_str();
  gen->add_option("--dt", dt, "Sample period in seconds")->capture_default_str()->check(CLI::PositiveNumber);
  add_overrides(gen, o);
  gen->add_option("--out-dir", out_dir, "Output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (run1->parsed()) return cmd_run(Protocol::kSensorFusion, scenario_path, o, out_dir);
    if (run2->parsed()) return cmd_run(Protocol::kGroupDiffusion, scenario_path, o, out_dir);
    if (attack->parsed()) {
      if (run_path.empty() && scenario_path.empty()) {
        throw ValidationError("attack needs --run or --scenario");
      }
      return cmd_attack(run_path, scenario_path, protocol, o, coalition, attack_step,
                        attack_out);
    }
    if (bench->parsed()) return cmd_bench(scenario_path, o, key_sizes, out_dir);
    if (gen->parsed()) return cmd_gen(sensors, groups, dt, o, out_dir);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}

}  // namespace privkf
