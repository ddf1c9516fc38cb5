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

// Group-diffusion protocol: each sensor group updates the last global
// estimate with its own readings in plaintext and sends the encrypted prior;
// the aggregator fuses the priors and runs the time update on ciphertexts;
// the query node decrypts and broadcasts the result back to the groups.

#include <optional>
#include <vector>

#include <gmpxx.h>

#include "privkf/bus.hpp"
#include "privkf/kalman.hpp"
#include "privkf/run.hpp"
#include "privkf/scenario.hpp"
#include "privkf/transcript.hpp"

namespace privkf::protocol2 {

struct RunOptions {
  std::optional<RunData> data;
  // Group that sends nothing at silent_step.
  int silent_group = -1;
  int silent_step = -1;
};

// Requires a grouped scenario. Estimates at step k predict x_{k+1}.
RunResult run_protocol2(const Scenario& scenario, const RunOptions& options = {});

// Groups encrypt at frac_bits every round, so these are fixed.
inline unsigned group_prior_exponent(unsigned frac_bits) { return frac_bits; }
inline unsigned fused_exponent(unsigned frac_bits) { return 2 * frac_bits; }
inline unsigned estimate_exponent(unsigned frac_bits) { return 3 * frac_bits; }

struct StepCovariances {
  std::vector<Matrix> group_priors;
  Matrix fused;
  Matrix global;
};
std::vector<StepCovariances> public_covariances(const Scenario& scenario, int steps);

std::vector<DeliveryRecord> schedule(const Scenario& scenario, int step);

namespace views {

void query_setup(Transcript& t, const Scenario& scenario, const phe::KeyPair& keys);
void group_setup(Transcript& t, const Scenario& scenario, const phe::PublicKey& pk);
void aggregator_setup(Transcript& t, const Scenario& scenario, const phe::PublicKey& pk);

// Readings and the plaintext update inside group t.party().index.
void group_step(Transcript& t, int step, const Scenario& scenario,
                const std::vector<Vector>& readings, const kalman::GroupResult& update,
                const std::vector<mpz_class>& coins);
// The broadcast global estimate; step 0 carries the initial estimate.
void group_receive(Transcript& t, int step, const Vector& x, const Matrix& p);
void aggregator_step(Transcript& t, int step, const std::vector<EncVector>& priors,
                     const StepCovariances& cov, const EncVector& fused,
                     const EncVector& global);
void query_step(Transcript& t, int step, const EncVector& received, const Matrix& p,
                const Vector& decoded);

}  // namespace views

}  // namespace privkf::protocol2
