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
#include "privkf/run.hpp"

#include <algorithm>

namespace privkf {

std::string to_string(Protocol protocol) {
  return protocol == Protocol::kSensorFusion ? "sensor-fusion" : "group-diffusion";
}

std::size_t RunResult::messages_in_step(int step) const {
  return static_cast<std::size_t>(std::count_if(
      deliveries.begin(), deliveries.end(), [step](const auto& d) { return d.step == step; }));
}

std::size_t RunResult::total_bytes() const {
  std::size_t total = 0;
  for (const auto& d : deliveries) total += d.bytes;
  return total;
}

double RunResult::max_reference_deviation() const {
  double worst = 0.0;
  for (std::size_t k = 0; k < estimates.size() && k < reference.size(); ++k) {
    worst = std::max(worst, (estimates[k] - reference[k]).cwiseAbs().maxCoeff());
  }
  return worst;
}

std::map<Role, double> mean_step_ms(const RunResult& run) {
  std::map<Role, std::pair<double, int>> sums;
  for (const auto& [party, times] : run.step_ms) {
    for (double t : times) {
      sums[party.role].first += t;
      ++sums[party.role].second;
    }
  }
  std::map<Role, double> out;
  for (const auto& [role, s] : sums) {
    if (s.second > 0) out[role] = s.first / s.second;
  }
  return out;
}

void record_known_model(Transcript& t, const Scenario& scenario,
                        const std::vector<int>& own_sensors) {
  const bool aggregator = t.party().role == Role::kAggregator;
  if (aggregator || !scenario.private_FQ) {
    t.add_input_matrix(0, "F", Quantity::kProcessModel, -1, scenario.model.F);
    t.add_input_matrix(0, "Q", Quantity::kProcessNoise, -1, scenario.model.Q);
  }
  for (int i = 0; i < scenario.model.sensor_count(); ++i) {
    const bool own = std::find(own_sensors.begin(), own_sensors.end(), i) != own_sensors.end();
    if (!aggregator && !own && scenario.private_HR) continue;
    const auto& s = scenario.model.sensors[static_cast<std::size_t>(i)];
    t.add_input_matrix(0, "H", Quantity::kObservationModel, i, s.H);
    t.add_input_matrix(0, "R", Quantity::kNoiseCovariance, i, s.R);
  }
}

std::uint64_t coin_stream_id(PartyId party) {
  return (static_cast<std::uint64_t>(party.role) << 32) |
         static_cast<std::uint32_t>(party.index);
}

}  // namespace privkf
