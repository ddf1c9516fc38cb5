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

#include <optional>
#include <span>
#include <vector>

#include "privkf/coins.hpp"
#include "privkf/matlib.hpp"
#include "privkf/phe.hpp"

namespace privkf::kalman {

struct SensorModel {
  Matrix H;  // p x n
  Matrix R;  // p x p, SPD
};

// x_k = F x_{k-1} + n_k,  y_{i,k} = H_i x_k + v_{i,k}.
struct SystemModel {
  Matrix F;
  Matrix Q;
  std::vector<SensorModel> sensors;

  int n() const { return static_cast<int>(F.rows()); }
  // Measurement size of the first sensor; validate() checks uniformity.
  int p() const { return sensors.empty() ? 0 : static_cast<int>(sensors.front().H.rows()); }
  int sensor_count() const { return static_cast<int>(sensors.size()); }

  // Dimensional consistency; with require_spd, Q and every R must be SPD.
  void validate(bool require_spd = true) const;
};

struct Belief {
  Vector x;
  Matrix P;
};

struct EncBelief {
  EncVector x;
  Matrix P;
};

Belief time_update(const SystemModel& model, const Belief& belief);
EncBelief time_update(const phe::PublicKey& pk, const SystemModel& model,
                      const EncBelief& belief, unsigned frac_bits);

template <class Y>
struct StackedMeasurement {
  Y y;       // length p * I, sensor-index order
  Matrix H;  // pI x n
  Matrix R;  // pI x pI block-diagonal
};

// Throws IncompleteRoundError when a reading is missing and
// DimensionMismatchError when measurement sizes differ.
template <class Y>
StackedMeasurement<Y> stack(std::span<const SensorModel> sensors,
                            std::span<const std::optional<Y>> readings);

struct GainSet {
  Matrix P;                        // posterior covariance
  Matrix K;                        // stacked gain, n x pI
  std::vector<Matrix> sensor_gains;  // K_i = P H_i^T R_i^-1
};

// Information-form covariance and gains: P = (P^-^-1 + H^T R^+ H)^-1,
// K = P H^T R^+.
GainSet parallel_gains(const Matrix& prior_p, std::span<const SensorModel> sensors);

struct ParallelResult {
  Belief posterior;
  GainSet gains;
};

struct EncParallelResult {
  EncBelief posterior;
  GainSet gains;
};

ParallelResult measurement_update_parallel(const Belief& prior,
                                           std::span<const SensorModel> sensors,
                                           const StackedMeasurement<Vector>& stacked);
EncParallelResult measurement_update_parallel(const phe::PublicKey& pk,
                                              const EncBelief& prior,
                                              std::span<const SensorModel> sensors,
                                              const StackedMeasurement<EncVector>& stacked,
                                              unsigned frac_bits);

struct GroupResult {
  Belief prior;  // x^-_{g_j}, P^-_{g_j}
  std::vector<Matrix> gains;
};

// Plaintext measurement update inside one sensor group, starting from the
// previous global estimate.
GroupResult group_measurement_update(const Belief& previous_global,
                                     std::span<const SensorModel> sensors,
                                     std::span<const Vector> readings);
// Covariance part alone; depends only on public model data.
Matrix group_prior_covariance(const Matrix& previous_p,
                              std::span<const SensorModel> sensors);

// Inverse-covariance weighted average of group priors.
Belief diffusion_update(std::span<const Belief> priors);
EncBelief diffusion_update(const phe::PublicKey& pk, std::span<const EncBelief> priors,
                           unsigned frac_bits);
Matrix diffusion_covariance(std::span<const Matrix> prior_covariances);

struct PlantTrace {
  std::vector<Vector> states;                     // x_1 .. x_K
  std::vector<std::vector<Vector>> measurements;  // [k][sensor]
};

// Zero Q or R matrices disable the corresponding noise.
PlantTrace simulate_plant(const SystemModel& model, const Vector& x0, int steps,
                          CoinStream& coins);

// Plaintext references for the two protocols. Each returns one belief per
// step: posterior x_k for the centralized filter, and the time-updated
// global estimate for the diffusion filter.
std::vector<Belief> run_centralized_filter(const SystemModel& model, const Belief& initial,
                                           const std::vector<std::vector<Vector>>& measurements);

struct DiffusionStep {
  std::vector<Belief> group_priors;
  Belief fused;   // x^-_a, P^-_a
  Belief global;  // x_a, P_a after the time update
};

std::vector<DiffusionStep> run_diffusion_filter(
    const SystemModel& model, const std::vector<std::vector<int>>& groups,
    const Belief& initial, const std::vector<std::vector<Vector>>& measurements);

std::vector<SensorModel> select_sensors(const SystemModel& model,
                                        std::span<const int> indices);

}  // namespace privkf::kalman
