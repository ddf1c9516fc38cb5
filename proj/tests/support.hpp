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

// Fixtures shared by the unit tests and the acceptance binary.

#include <random>
#include <vector>

#include "privkf/scenario.hpp"

namespace privkf::testing {

inline Matrix random_spd(std::mt19937_64& g, int n, double scale = 0.1, double floor = 0.05) {
  std::normal_distribution<double> d;
  Matrix a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a(i, j) = d(g);
  }
  return scale * a * a.transpose() + floor * Matrix::Identity(n, n);
}

inline Matrix random_matrix(std::mt19937_64& g, int rows, int cols) {
  std::normal_distribution<double> d;
  Matrix a(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) a(i, j) = d(g);
  }
  return a;
}

// Random H and R per sensor, so stacked gains have full generic rank.
inline Scenario generic_scenario(std::uint64_t seed, int n, int p, int sensors, int steps = 3,
                                 unsigned key_bits = 512) {
  std::mt19937_64 g(seed);
  Scenario s;
  s.name = "generic";
  s.model.F = Matrix::Identity(n, n) + 0.05 * random_matrix(g, n, n);
  s.model.Q = 0.1 * random_spd(g, n);
  for (int i = 0; i < sensors; ++i) {
    s.model.sensors.push_back({random_matrix(g, p, n), random_spd(g, p)});
  }
  s.x0 = Vector::Ones(n);
  s.P0 = Matrix::Identity(n, n);
  s.x_hat0 = Vector::Zero(n);
  s.steps = steps;
  s.key_bits = key_bits;
  s.seeds = Seeds{seed, seed + 1, seed + 2};
  return s;
}

// `groups` groups of `per_group` consecutive sensors.
inline Scenario generic_grouped_scenario(std::uint64_t seed, int n, int p, int groups,
                                         int per_group, int steps = 3,
                                         unsigned key_bits = 512) {
  Scenario s = generic_scenario(seed, n, p, groups * per_group, steps, key_bits);
  for (int j = 0; j < groups; ++j) {
    auto& members = s.groups.emplace_back();
    for (int i = 0; i < per_group; ++i) members.push_back(j * per_group + i);
  }
  return s;
}

// Constant-velocity 3D body with six sensors of distinct noise levels, three
// groups of two.
inline Scenario tracking_scenario(int sensors = 6, int steps = 50, unsigned key_bits = 512) {
  std::vector<double> noise;
  for (int i = 0; i < sensors; ++i) noise.push_back(0.01 * (i + 1));
  Scenario s = constant_velocity_scenario(sensors, 0.01, 0.1, noise);
  s.steps = steps;
  s.key_bits = key_bits;
  return s;
}

}  // namespace privkf::testing
