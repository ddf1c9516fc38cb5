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

// Coalition views, the view simulator and the query-coalition attacks.

#include <optional>
#include <string>
#include <vector>

#include "privkf/coins.hpp"
#include "privkf/matlib.hpp"
#include "privkf/phe.hpp"
#include "privkf/run.hpp"
#include "privkf/scenario.hpp"
#include "privkf/transcript.hpp"

namespace privkf::privacy {

enum class CoalitionKind { kSensor, kCloud, kQuery };

std::string to_string(CoalitionKind kind);

// Members are 0-based sensor indices under sensor fusion and group indices
// under group diffusion. Cloud and query coalitions add the aggregator or the
// query node to the members.
struct CoalitionSpec {
  CoalitionKind kind = CoalitionKind::kQuery;
  std::vector<int> members;
};

// Parses "kind=query,members=1,2". Throws ValidationError.
CoalitionSpec parse_coalition(const std::string& text);
std::string to_string(const CoalitionSpec& spec);

// Members must be distinct and in range, at least one sensor (or group) must
// stay outside, and a sensor coalition needs a member.
void validate(const CoalitionSpec& spec, const Scenario& scenario, Protocol protocol);

// Sensors (or groups) outside the coalition: m_r or d_r.
std::vector<int> non_members(const CoalitionSpec& spec, const Scenario& scenario,
                             Protocol protocol);

// Members in index order, then the aggregator or query node.
std::vector<PartyId> coalition_parties(const CoalitionSpec& spec, Protocol protocol);

Transcript extract_view(const RunResult& run, const CoalitionSpec& spec);

struct Finding {
  int step = 0;
  std::string entry;
  std::string problem;
};

// Plaintext values the coalition is not entitled to: measurements of outside
// sensors, group priors of outside groups, estimates without the query node
// (or a group under group diffusion), and private-key material without the
// query node.
std::vector<Finding> scan_view(const Transcript& view, const CoalitionSpec& spec,
                               const Scenario& scenario, Protocol protocol);

// What the coalition legitimately holds: public model data, its members'
// readings, the public key, the private key with the query node, and the
// global estimates when it receives them.
struct SimulatorInput {
  CoalitionSpec coalition;
  Protocol protocol = Protocol::kSensorFusion;
  Scenario scenario;  // true initial state and unentitled initial estimate zeroed
  int steps = 0;
  phe::PublicKey pk;
  std::optional<phe::PrivateKey> sk;
  std::map<int, std::vector<Vector>> readings;  // member sensor -> per-step readings
  std::vector<Vector> estimates;
};

SimulatorInput simulator_input(const RunResult& run, const CoalitionSpec& spec);

// Synthetic coalition view: ciphertexts are fresh encryptions of uniform
// plaintexts at the exponents the protocol produces, coins are fresh draws,
// covariances and gains come from the public recursions, and member data is
// copied from the input.
Transcript simulate_view(const SimulatorInput& input, CoinStream& coins);

enum class Verdict { kPrivacyBroken, kPrivacyPreserved };

std::string to_string(Verdict verdict);

inline constexpr double kRecoveryTolerance = 1e-6;
inline constexpr double kResidualTolerance = 1e-6;

// Linear system the coalition can form for the outside sensors' readings
// (sensor fusion) or outside groups' priors (group diffusion) in one round.
struct AttackReport {
  CoalitionSpec coalition;
  Protocol protocol = Protocol::kSensorFusion;
  int step = 0;
  Matrix system;
  Vector rhs;
  Matrix generalized_inverse;
  int rank = 0;
  int nullspace_dim = 0;
  bool unique = false;
  Vector solution;  // minimum-norm
  Vector truth;
  double recovery_error = 0.0;
  double residual = 0.0;
  Verdict verdict = Verdict::kPrivacyPreserved;
  Verdict predicted = Verdict::kPrivacyPreserved;
  // Per-round systems of every step placed block-diagonally.
  int stacked_rank = 0;
  int stacked_unknowns = 0;

  // G z + (I - G A) free: a solution for any free vector.
  Vector family_member(const Vector& free) const;

  std::string to_text() const;
  static std::string csv_header();
  std::string to_csv_row() const;
};

// Round `step` (1-based; 0 means the last round). Throws AttackInapplicable
// when H/R or F/Q are withheld, or under group diffusion when F is singular,
// and NumericalError when the recovered solution does not satisfy the system.
AttackReport attack_protocol1_query_coalition(const RunResult& run, const CoalitionSpec& spec,
                                              int step = 0);
AttackReport attack_protocol2_query_coalition(const RunResult& run, const CoalitionSpec& spec,
                                              int step = 0);
AttackReport attack(const RunResult& run, const CoalitionSpec& spec, int step = 0);

// Sensor and cloud coalitions are always preserved; query coalitions are
// preserved when p*m_r > n (sensor fusion) or d_r > 1 (group diffusion).
Verdict check_theorem_conditions(const Scenario& scenario, Protocol protocol,
                                 const CoalitionSpec& spec);

}  // namespace privkf::privacy
