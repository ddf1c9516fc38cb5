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
#pragma once

// Scenario configuration and trajectory data.
//
// Scenario files are JSON (schema version 1). Matrices are arrays of rows.
//
//   {
//     "version": 1,
//     "name": "demo",
//     "F": [[1, 0.01], [0, 1]],  "Q": [[...], [...]],
//     "sensors": [{"H": [[1, 0]], "R": [[0.1]]}, ...],
//     "groups": [[0, 1], [2, 3]],            // optional, required by run2
//     "x0": [0, 1],  "P0": [[1, 0], [0, 1]],
//     "x_hat0": [0, 0],                       // optional, defaults to x0
//     "steps": 50, "key_bits": 2048, "frac_bits": 40,
//     "private_HR": false, "private_FQ": false,
//     "refresh": true, "plant_noise": true,
//     "seeds": {"plant": 1, "crypto": 2, "simulator": 3},
//     "data": {"source": "synthetic"}        // or {"source": "csv", "path": "traj.csv"}
//   }

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "privkf/kalman.hpp"
#include "privkf/matlib.hpp"

namespace privkf {

inline constexpr int kScenarioVersion = 1;

struct Seeds {
  std::uint64_t plant = 1;
  std::uint64_t crypto = 2;
  std::uint64_t simulator = 3;
};

enum class DataSource { kSynthetic, kCsv };

struct Scenario {
  std::string name = "scenario";
  kalman::SystemModel model;
  std::vector<std::vector<int>> groups;
  Vector x0;
  Matrix P0;
  // Protocol 1 predicts before its first update; group diffusion updates
  // first, so there x_hat0 is the prior on the state at the first reading.
  Vector x_hat0;
  int steps = 1;
  unsigned key_bits = 2048;
  unsigned frac_bits = 40;
  bool private_HR = false;
  bool private_FQ = false;
  bool refresh = true;
  bool plant_noise = true;
  Seeds seeds;
  DataSource source = DataSource::kSynthetic;
  std::filesystem::path csv_path;  // resolved against the scenario file's directory

  bool grouped() const { return !groups.empty(); }
  int n() const { return model.n(); }
  int p() const { return model.p(); }

  // Throws ValidationError naming the offending field.
  void validate() const;
};

Scenario parse_scenario(const nlohmann::json& doc,
                        const std::filesystem::path& base_dir = {});
Scenario load_scenario(const std::filesystem::path& path);
nlohmann::json to_json(const Scenario& scenario);
void save_scenario(const Scenario& scenario, const std::filesystem::path& path);

// Constant-velocity 3D model: state (x, y, z, vx, vy, vz), every sensor
// observes position.
Scenario constant_velocity_scenario(int sensors, double dt, double process_noise,
                                    const std::vector<double>& sensor_noise);

struct TrajectoryCsv {
  std::vector<double> times;
  // True states, possibly only the leading components (positions). Empty
  // when the file carries no truth columns.
  std::vector<Vector> truth;
  // [step][sensor]; empty for the single rigid-body format.
  std::vector<std::vector<Vector>> measurements;
};

// Accepts `t,x,y,z` (one rigid body, read as true positions) or a per-sensor
// layout `t[,true_0..true_{m-1}],s0_0..s0_{p-1},s1_0,...`. Rows must be
// complete and t strictly increasing.
TrajectoryCsv ingest_csv(const std::filesystem::path& path);

// Per-sensor layout with round-trip (17 significant digit) reals.
void export_trajectory_csv(const std::filesystem::path& path, const TrajectoryCsv& data);

// Plant data for a run: true states x_1.. and per-step sensor readings.
struct RunData {
  std::vector<Vector> truth;
  std::vector<std::vector<Vector>> measurements;
};

// Synthetic data comes from the plant simulator under seeds.plant; CSV data
// is read from csv_path (single-body files get per-sensor noise added).
// `steps` readings are produced along with steps + extra_truth true states.
RunData prepare_run_data(const Scenario& scenario, int steps, int extra_truth = 0);

}  // namespace privkf
