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

// Sensor-fusion protocol: sensors encrypt their readings, the aggregator runs
// the time and parallel measurement updates on ciphertexts, and the query
// node holds the key and decrypts the estimate.

#include <optional>
#include <vector>

#include <gmpxx.h>

#include "privkf/bus.hpp"
#include "privkf/kalman.hpp"
#include "privkf/run.hpp"
#include "privkf/scenario.hpp"
#include "privkf/transcript.hpp"

namespace privkf::protocol1 {

struct RunOptions {
  // Drive the run with these readings instead of the scenario's data source.
  std::optional<RunData> data;
  // Sensor that sends nothing at silent_step; the round then cannot finish.
  int silent_sensor = -1;
  int silent_step = -1;
};

// Requires at least two sensors. Throws IncompleteRoundError when a reading
// is missing and ExponentBudgetExceeded when refresh is off and the estimate
// exponent outgrows the key.
RunResult run_protocol1(const Scenario& scenario, const RunOptions& options = {});

struct Refresh {
  EncVector x;  // at frac_bits
  Vector decoded;
  std::vector<mpz_class> coins;
};

Refresh query_refresh(const phe::PrivateKey& sk, const EncVector& x, unsigned frac_bits,
                      CoinStream& coins);

// Exponent of the aggregator's estimate after `step` rounds (step 0 is the
// initial encryption), and of its time-updated prior in round `step`.
unsigned estimate_exponent(unsigned frac_bits, int step, bool refresh);
unsigned prior_exponent(unsigned frac_bits, int step, bool refresh);

// First round whose measurement update would exceed the exponent budget when
// refresh is off.
int first_overflow_step(unsigned key_bits, unsigned frac_bits);

// Covariances and gains depend only on public model data.
struct StepCovariances {
  Matrix prior;
  kalman::GainSet gains;
};
std::vector<StepCovariances> public_covariances(const Scenario& scenario, int steps);

// Messages of one round in send order (bytes left at zero).
std::vector<DeliveryRecord> schedule(const Scenario& scenario, int step);

// Per-party view recording shared by the protocol and the view simulator.
namespace views {

void query_setup(Transcript& t, const Scenario& scenario, const phe::KeyPair& keys,
                 const std::vector<mpz_class>& coins);
void aggregator_setup(Transcript& t, const Scenario& scenario, const phe::PublicKey& pk,
                      const EncVector& initial);
void sensor_setup(Transcript& t, const Scenario& scenario, const phe::PublicKey& pk);

void sensor_step(Transcript& t, int step, const Vector& y, const std::vector<mpz_class>& coins);
void aggregator_step(Transcript& t, int step, const Scenario& scenario,
                     const std::vector<EncVector>& readings, const StepCovariances& cov,
                     const EncVector& prior, const EncVector& posterior);
void aggregator_refresh(Transcript& t, int step, const EncVector& x);
void query_step(Transcript& t, int step, const EncVector& received, const Matrix& p,
                const Vector& decoded, const std::vector<mpz_class>& refresh_coins);

}  // namespace views

}  // namespace privkf::protocol1
