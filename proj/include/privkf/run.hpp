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

// Outcome of one protocol execution: decoded outputs, the plaintext data the
// run was driven by, every party's view and per-party timings.

#include <map>
#include <string>
#include <vector>

#include "privkf/bus.hpp"
#include "privkf/matlib.hpp"
#include "privkf/phe.hpp"
#include "privkf/scenario.hpp"
#include "privkf/transcript.hpp"

namespace privkf {

enum class Protocol { kSensorFusion = 1, kGroupDiffusion = 2 };

std::string to_string(Protocol protocol);

struct RunResult {
  Protocol protocol = Protocol::kSensorFusion;
  Scenario scenario;
  int steps = 0;
  phe::KeyPair keys;

  // Query-node outputs, one per step.
  std::vector<Vector> estimates;
  std::vector<Matrix> covariances;
  // Plaintext reference filter on the same data.
  std::vector<Vector> reference;
  // True state each estimate targets: x_k for sensor fusion, x_{k+1} for
  // group diffusion. Shorter than `estimates`, or holding only leading state
  // components, when CSV data lacks them.
  std::vector<Vector> truth;
  std::vector<std::vector<Vector>> measurements;  // [step][sensor]

  // Group diffusion only: [step][group].
  std::vector<std::vector<Vector>> group_priors;
  std::vector<std::vector<Matrix>> group_prior_covariances;

  std::map<PartyId, Transcript> transcripts;
  std::map<PartyId, std::vector<double>> step_ms;  // wall clock per step 1..K
  std::vector<DeliveryRecord> deliveries;
  unsigned max_exponent = 0;

  std::size_t messages_in_step(int step) const;
  std::size_t total_bytes() const;
  double max_reference_deviation() const;
};

// Mean step time per role over all parties of that role and steps 1..K.
// Roles without samples are absent.
std::map<Role, double> mean_step_ms(const RunResult& run);

// Model data a party holds at setup: the aggregator holds everything, others
// hold the public parts plus their own sensors' H and R.
void record_known_model(Transcript& t, const Scenario& scenario,
                        const std::vector<int>& own_sensors);

// Encryption coin stream for one party under the crypto seed.
std::uint64_t coin_stream_id(PartyId party);

}  // namespace privkf
