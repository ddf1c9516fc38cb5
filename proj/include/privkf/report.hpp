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

// Run metrics, report files and the run artifact read back by `attack`.

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "privkf/run.hpp"

namespace privkf::report {

// Published per-role mean step times in ms, for context only.
struct ReferenceTimes {
  double sensor_side;  // sensor or sensor group
  double aggregator;
  double query;
};
ReferenceTimes reference_times(Protocol protocol);

struct RunMetrics {
  // estimate - truth over the leading components the truth carries; one entry
  // per step that has a true state.
  std::vector<Vector> errors;
  Vector rms;
  std::map<Role, double> mean_ms;
  std::size_t messages = 0;
  std::size_t bytes = 0;
  double max_reference_deviation = 0.0;
};

RunMetrics compute_metrics(const RunResult& run);

// Per-role measured means next to the published reference row. Empty for a
// run without steps.
std::string timing_report(const RunResult& run, const RunMetrics& metrics);

// Writes estimates.csv, error.csv and timing.txt (12 significant digits).
void emit_reports(const RunResult& run, const RunMetrics& metrics,
                  const std::filesystem::path& out_dir);

// transcripts/<party>.txt, one file per party.
void write_transcripts(const RunResult& run, const std::filesystem::path& out_dir);

// Everything but transcripts and timings.
nlohmann::json run_to_json(const RunResult& run);
RunResult run_from_json(const nlohmann::json& doc);
void save_run(const RunResult& run, const std::filesystem::path& path);
RunResult load_run(const std::filesystem::path& path);

}  // namespace privkf::report
