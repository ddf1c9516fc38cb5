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
#include "privkf/privacy.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>

#include "privkf/errors.hpp"
#include "privkf/kalman.hpp"
#include "privkf/protocol1.hpp"
#include "privkf/protocol2.hpp"

namespace privkf::privacy {

namespace {

bool contains(const std::vector<int>& v, int x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

int unit_count(const Scenario& scenario, Protocol protocol) {
  return protocol == Protocol::kSensorFusion ? scenario.model.sensor_count()
                                             : static_cast<int>(scenario.groups.size());
}

// Group of each sensor; -1 when the scenario is flat.
std::vector<int> group_of(const Scenario& scenario) {
  std::vector<int> out(static_cast<std::size_t>(scenario.model.sensor_count()), -1);
  for (std::size_t j = 0; j < scenario.groups.size(); ++j) {
    for (int i : scenario.groups[j]) out[static_cast<std::size_t>(i)] = static_cast<int>(j);
  }
  return out;
}

bool sensor_is_member(int sensor, const CoalitionSpec& spec, const Scenario& scenario,
                      Protocol protocol) {
  if (sensor < 0) return true;
  if (protocol == Protocol::kSensorFusion) return contains(spec.members, sensor);
  return contains(spec.members, group_of(scenario)[static_cast<std::size_t>(sensor)]);
}

std::string real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string join(const Vector& v) {
  std::string out;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i > 0) out += ' ';
    out += real(v(i));
  }
  return out;
}

EncVector random_cipher(const phe::PublicKey& pk, std::size_t count, unsigned exponent,
                        CoinStream& coins) {
  EncVector out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const mpz_class m = coins.uniform_below(pk.n());
    out.push_back(Ciphertext{phe::encrypt_with_coin(pk, m, phe::draw_coin(pk, coins)), exponent});
  }
  return out;
}

std::vector<mpz_class> random_coins(const phe::PublicKey& pk, std::size_t count,
                                    CoinStream& coins) {
  std::vector<mpz_class> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(phe::draw_coin(pk, coins));
  return out;
}

void envelopes(Transcript& t, const std::vector<DeliveryRecord>& schedule, int step) {
  std::map<PartyId, Transcript*> one{{t.party(), &t}};
  record_envelopes(schedule, step, one);
}

void parse_member(const std::string& text, std::vector<int>& out) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || text.empty()) {
    throw ValidationError("coalition member '" + text + "' is not an integer");
  }
  out.push_back(v);
}

}  // namespace

std::string to_string(CoalitionKind kind) {
  switch (kind) {
    case CoalitionKind::kSensor:
      return "sensor";
    case CoalitionKind::kCloud:
      return "cloud";
    case CoalitionKind::kQuery:
      return "query";
  }
  return "?";
}

std::string to_string(Verdict verdict) {
  return verdict == Verdict::kPrivacyBroken ? "PrivacyBroken" : "PrivacyPreserved";
}

CoalitionSpec parse_coalition(const std::string& text) {
  CoalitionSpec spec;
  bool have_kind = false;
  bool in_members = false;
  std::istringstream in(text);
  std::string token;
  while (std::getline(in, token, ',')) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) {
      if (!in_members) throw ValidationError("unexpected coalition token '" + token + "'");
      parse_member(token, spec.members);
      continue;
    }
    const std::string key = token.substr(0, eq);
    const std::string value = token.substr(eq + 1);
    if (key == "kind") {
      in_members = false;
      have_kind = true;
      if (value == "sensor") {
        spec.kind = CoalitionKind::kSensor;
      } else if (value == "cloud") {
        spec.kind = CoalitionKind::kCloud;
      } else if (value == "query") {
        spec.kind = CoalitionKind::kQuery;
      } else {
        throw ValidationError("unknown coalition kind '" + value + "'");
      }
    } else if (key == "members") {
      in_members = true;
      if (!value.empty()) parse_member(value, spec.members);
    } else {
      throw ValidationError("unknown coalition key '" + key + "'");
    }
  }
  if (!have_kind) throw ValidationError("coalition needs kind=sensor|cloud|query");
  return spec;
}

std::string to_string(const CoalitionSpec& spec) {
  std::string out = "kind=" + to_string(spec.kind) + ",members=";
  for (std::size_t i = 0; i < spec.members.size(); ++i) {
    if (i > 0) out += ',';
    out += std::to_string(spec.members[i]);
  }
  return out;
}

void validate(const CoalitionSpec& spec, const Scenario& scenario, Protocol protocol) {
  const int units = unit_count(scenario, protocol);
  std::set<int> seen;
  for (int m : spec.members) {
    if (m < 0 || m >= units) throw ValidationError("unknown coalition member " + std::to_string(m));
    if (!seen.insert(m).second) {
      throw ValidationError("coalition member " + std::to_string(m) + " listed twice");
    }
  }
  if (static_cast<int>(seen.size()) >= units) {
    throw ValidationError("at least one sensor or group must stay outside the coalition");
  }
  if (spec.kind == CoalitionKind::kSensor && spec.members.empty()) {
    throw ValidationError("a sensor coalition needs at least one member");
  }
}

std::vector<int> non_members(const CoalitionSpec& spec, const Scenario& scenario,
                             Protocol protocol) {
  std::vector<int> out;
  for (int i = 0; i < unit_count(scenario, protocol); ++i) {
    if (!contains(spec.members, i)) out.push_back(i);
  }
  return out;
}

std::vector<PartyId> coalition_parties(const CoalitionSpec& spec, Protocol protocol) {
  std::vector<int> members = spec.members;
  std::sort(members.begin(), members.end());
  std::vector<PartyId> out;
  for (int m : members) {
    out.push_back(protocol == Protocol::kSensorFusion ? PartyId::sensor(m) : PartyId::group(m));
  }
  if (spec.kind == CoalitionKind::kCloud) out.push_back(PartyId::aggregator());
  if (spec.kind == CoalitionKind::kQuery) out.push_back(PartyId::query());
  return out;
}

Transcript extract_view(const RunResult& run, const CoalitionSpec& spec) {
  validate(spec, run.scenario, run.protocol);
  const auto parties = coalition_parties(spec, run.protocol);
  Transcript view(parties.back());
  for (const auto& id : parties) {
    const auto it = run.transcripts.find(id);
    if (it == run.transcripts.end()) {
      throw ValidationError("run has no transcript for " + privkf::to_string(id));
    }
    view.append(it->second);
  }
  return view;
}

std::vector<Finding> scan_view(const Transcript& view, const CoalitionSpec& spec,
                               const Scenario& scenario, Protocol protocol) {
  const bool with_query = spec.kind == CoalitionKind::kQuery;
  const bool sees_estimates =
      with_query || (protocol == Protocol::kGroupDiffusion && !spec.members.empty());
  std::vector<Finding> out;
  for (const auto& e : view.entries()) {
    auto flag = [&](const std::string& problem) { out.push_back({e.step, e.shape(), problem}); };
    if (e.type == FieldType::kPrivateKey && !with_query) flag("private key outside the query node");
    if (!e.is_plaintext_value()) continue;
    switch (e.quantity) {
      case Quantity::kMeasurement:
        if (!sensor_is_member(e.subject, spec, scenario, protocol)) {
          flag("plaintext reading of an outside sensor");
        }
        break;
      case Quantity::kGroupPrior:
        if (!contains(spec.members, e.subject)) flag("plaintext prior of an outside group");
        break;
      case Quantity::kEstimate:
        if (!sees_estimates) flag("plaintext estimate without the query node");
        break;
      default:
        break;
    }
  }
  return out;
}

SimulatorInput simulator_input(const RunResult& run, const CoalitionSpec& spec) {
  validate(spec, run.scenario, run.protocol);
  SimulatorInput in;
  in.coalition = spec;
  in.protocol = run.protocol;
  in.scenario = run.scenario;
  in.steps = run.steps;
  in.pk = run.keys.pk;
  const bool with_query = spec.kind == CoalitionKind::kQuery;
  const bool sees_estimates =
      with_query || (run.protocol == Protocol::kGroupDiffusion && !spec.members.empty());
  in.scenario.x0.setZero();
  if (!sees_estimates) in.scenario.x_hat0.setZero();
  if (with_query) in.sk = run.keys.sk;
  if (sees_estimates) in.estimates = run.estimates;
  for (int i = 0; i < run.scenario.model.sensor_count(); ++i) {
    if (!sensor_is_member(i, spec, run.scenario, run.protocol)) continue;
    auto& series = in.readings[i];
    for (const auto& step : run.measurements) series.push_back(step[static_cast<std::size_t>(i)]);
  }
  return in;
}

namespace {

Transcript simulate_protocol1(const SimulatorInput& in, PartyId party, CoinStream& coins) {
  const Scenario& s = in.scenario;
  const unsigned f = s.frac_bits;
  const auto n = static_cast<std::size_t>(s.n());
  const auto p = static_cast<std::size_t>(s.p());
  const auto cov = protocol1::public_covariances(s, in.steps);
  Transcript t(party);
  switch (party.role) {
    case Role::kSensor:
      protocol1::views::sensor_setup(t, s, in.pk);
      break;
    case Role::kAggregator:
      protocol1::views::aggregator_setup(t, s, in.pk, random_cipher(in.pk, n, f, coins));
      break;
    case Role::kQuery:
      protocol1::views::query_setup(t, s, phe::KeyPair{in.pk, *in.sk},
                                    random_coins(in.pk, n, coins));
      break;
    case Role::kGroup:
      throw ValidationError("sensor fusion has no groups");
  }
  envelopes(t, protocol1::schedule(s, 0), 0);
  for (int k = 1; k <= in.steps; ++k) {
    const auto& c = cov[static_cast<std::size_t>(k) - 1];
    switch (party.role) {
      case Role::kSensor:
        protocol1::views::sensor_step(t, k,
                                      in.readings.at(party.index)[static_cast<std::size_t>(k) - 1],
                                      random_coins(in.pk, p, coins));
        break;
      case Role::kAggregator: {
        std::vector<EncVector> ys;
        for (int i = 0; i < s.model.sensor_count(); ++i) ys.push_back(random_cipher(in.pk, p, f, coins));
        const EncVector prior =
            random_cipher(in.pk, n, protocol1::prior_exponent(f, k, s.refresh), coins);
        const EncVector post =
            random_cipher(in.pk, n, protocol1::estimate_exponent(f, k, s.refresh), coins);
        protocol1::views::aggregator_step(t, k, s, ys, c, prior, post);
        if (s.refresh) protocol1::views::aggregator_refresh(t, k, random_cipher(in.pk, n, f, coins));
        break;
      }
      case Role::kQuery: {
        const EncVector received =
            random_cipher(in.pk, n, protocol1::estimate_exponent(f, k, s.refresh), coins);
        protocol1::views::query_step(
            t, k, received, c.gains.P, in.estimates[static_cast<std::size_t>(k) - 1],
            s.refresh ? random_coins(in.pk, n, coins) : std::vector<mpz_class>{});
        break;
      }
      case Role::kGroup:
        break;
    }
    envelopes(t, protocol1::schedule(s, k), k);
  }
  return t;
}

Transcript simulate_protocol2(const SimulatorInput& in, PartyId party, CoinStream& coins) {
  const Scenario& s = in.scenario;
  const unsigned f = s.frac_bits;
  const auto n = static_cast<std::size_t>(s.n());
  const auto cov = protocol2::public_covariances(s, in.steps);
  Transcript t(party);
  switch (party.role) {
    case Role::kGroup:
      protocol2::views::group_setup(t, s, in.pk);
      protocol2::views::group_receive(t, 0, s.x_hat0, s.P0);
      break;
    case Role::kAggregator:
      protocol2::views::aggregator_setup(t, s, in.pk);
      break;
    case Role::kQuery:
      protocol2::views::query_setup(t, s, phe::KeyPair{in.pk, *in.sk});
      break;
    case Role::kSensor:
      throw ValidationError("group diffusion has no standalone sensors");
  }
  envelopes(t, protocol2::schedule(s, 0), 0);
  for (int k = 1; k <= in.steps; ++k) {
    const auto idx = static_cast<std::size_t>(k) - 1;
    const auto& c = cov[idx];
    switch (party.role) {
      case Role::kGroup: {
        const auto& members = s.groups[static_cast<std::size_t>(party.index)];
        std::vector<Vector> ys;
        for (int i : members) ys.push_back(in.readings.at(i)[idx]);
        const kalman::Belief previous =
            k == 1 ? kalman::Belief{s.x_hat0, s.P0}
                   : kalman::Belief{in.estimates[idx - 1], cov[idx - 1].global};
        const auto update = kalman::group_measurement_update(
            previous, kalman::select_sensors(s.model, members), ys);
        protocol2::views::group_step(t, k, s, ys, update, random_coins(in.pk, n, coins));
        protocol2::views::group_receive(t, k, in.estimates[idx], c.global);
        break;
      }
      case Role::kAggregator: {
        std::vector<EncVector> priors;
        for (std::size_t j = 0; j < s.groups.size(); ++j) {
          priors.push_back(random_cipher(in.pk, n, protocol2::group_prior_exponent(f), coins));
        }
        const EncVector fused = random_cipher(in.pk, n, protocol2::fused_exponent(f), coins);
        const EncVector global = random_cipher(in.pk, n, protocol2::estimate_exponent(f), coins);
        protocol2::views::aggregator_step(t, k, priors, c, fused, global);
        break;
      }
      case Role::kQuery: {
        const EncVector received = random_cipher(in.pk, n, protocol2::estimate_exponent(f), coins);
        protocol2::views::query_step(t, k, received, c.global, in.estimates[idx]);
        break;
      }
      case Role::kSensor:
        break;
    }
    envelopes(t, protocol2::schedule(s, k), k);
  }
  return t;
}

}  // namespace

Transcript simulate_view(const SimulatorInput& in, CoinStream& coins) {
  validate(in.coalition, in.scenario, in.protocol);
  const auto parties = coalition_parties(in.coalition, in.protocol);
  Transcript view(parties.back());
  for (const auto& id : parties) {
    view.append(in.protocol == Protocol::kSensorFusion ? simulate_protocol1(in, id, coins)
                                                       : simulate_protocol2(in, id, coins));
  }
  return view;
}

Vector AttackReport::family_member(const Vector& free) const {
  const Eigen::Index m = generalized_inverse.rows();
  return generalized_inverse * rhs +
         (Matrix::Identity(m, m) - generalized_inverse * system) * free;
}

std::string AttackReport::to_text() const {
  std::ostringstream out;
  out << "protocol: " << privkf::to_string(protocol) << '\n'
      << "coalition: " << privacy::to_string(coalition) << '\n'
      << "step: " << step << '\n'
      << "system: " << system.rows() << 'x' << system.cols() << '\n'
      << "unknowns: " << system.cols() << '\n'
      << "rank: " << rank << '\n'
      << "nullspace dimension: " << nullspace_dim << '\n'
      << "unique: " << (unique ? "yes" : "no") << '\n'
      << "residual: " << real(residual) << '\n'
      << "recovery error: " << real(recovery_error) << '\n'
      << "verdict: " << privacy::to_string(verdict) << '\n'
      << "predicted: " << privacy::to_string(predicted) << '\n'
      << "stacked rank: " << stacked_rank << " of " << stacked_unknowns << '\n'
      << "min-norm solution: " << join(solution) << '\n'
      << "true values: " << join(truth) << '\n';
  return out.str();
}

std::string AttackReport::csv_header() {
  return "protocol,coalition,step,unknowns,rank,nullspace_dim,unique,residual,recovery_error,"
         "verdict,predicted,stacked_rank,stacked_unknowns";
}

std::string AttackReport::to_csv_row() const {
  std::ostringstream out;
  out << privkf::to_string(protocol) << ",\"" << privacy::to_string(coalition) << "\"," << step
      << ',' << system.cols() << ',' << rank << ',' << nullspace_dim << ','
      << (unique ? 1 : 0) << ',' << real(residual) << ',' << real(recovery_error) << ','
      << privacy::to_string(verdict) << ',' << privacy::to_string(predicted) << ','
      << stacked_rank << ',' << stacked_unknowns;
  return out.str();
}

Verdict check_theorem_conditions(const Scenario& scenario, Protocol protocol,
                                 const CoalitionSpec& spec) {
  if (spec.kind != CoalitionKind::kQuery) return Verdict::kPrivacyPreserved;
  const auto outside = static_cast<int>(non_members(spec, scenario, protocol).size());
  const bool preserved = protocol == Protocol::kSensorFusion
                             ? scenario.p() * outside > scenario.n()
                             : outside > 1;
  return preserved ? Verdict::kPrivacyPreserved : Verdict::kPrivacyBroken;
}

namespace {

int resolve_step(const RunResult& run, int step) {
  if (run.steps < 1) throw ValidationError("run has no rounds to attack");
  if (step == 0) return run.steps;
  if (step < 1 || step > run.steps) {
    throw ValidationError("attack step " + std::to_string(step) + " outside 1.." +
                          std::to_string(run.steps));
  }
  return step;
}

void require_query(const CoalitionSpec& spec) {
  if (spec.kind != CoalitionKind::kQuery) {
    throw ValidationError("the attack applies to query coalitions");
  }
}

void solve(AttackReport& r) {
  r.generalized_inverse = matlib::pinv(r.system);
  r.rank = matlib::rank(r.system);
  r.nullspace_dim = static_cast<int>(r.system.cols()) - r.rank;
  r.unique = r.nullspace_dim == 0;
  r.solution = r.generalized_inverse * r.rhs;
  r.residual = (r.system * r.solution - r.rhs).cwiseAbs().maxCoeff();
  if (r.residual > kResidualTolerance) {
    throw NumericalError("attack system is inconsistent: residual " + real(r.residual));
  }
  r.recovery_error = (r.solution - r.truth).cwiseAbs().maxCoeff();
  r.verdict = r.unique && r.recovery_error <= kRecoveryTolerance ? Verdict::kPrivacyBroken
                                                                 : Verdict::kPrivacyPreserved;
}

Matrix outside_gains(const Scenario& s, const Matrix& posterior, const std::vector<int>& outside) {
  const Eigen::Index p = s.p();
  Matrix k(s.n(), p * static_cast<Eigen::Index>(outside.size()));
  for (std::size_t c = 0; c < outside.size(); ++c) {
    const auto& sensor = s.model.sensors[static_cast<std::size_t>(outside[c])];
    k.middleCols(p * static_cast<Eigen::Index>(c), p) =
        posterior * sensor.H.transpose() * matlib::inv(sensor.R);
  }
  return k;
}

}  // namespace

AttackReport attack_protocol1_query_coalition(const RunResult& run, const CoalitionSpec& spec,
                                              int step) {
  if (run.protocol != Protocol::kSensorFusion) {
    throw ValidationError("sensor-fusion attack needs a sensor-fusion run");
  }
  require_query(spec);
  validate(spec, run.scenario, run.protocol);
  const Scenario& s = run.scenario;
  if (s.private_HR || s.private_FQ) {
    throw AttackInapplicable("the coalition does not hold the sensor or process model");
  }
  const int k = resolve_step(run, step);
  const auto outside = non_members(spec, s, run.protocol);
  const auto idx = static_cast<std::size_t>(k) - 1;

  AttackReport r;
  r.coalition = spec;
  r.protocol = run.protocol;
  r.step = k;
  r.predicted = check_theorem_conditions(s, run.protocol, spec);

  // x_k = (I - sum_i K_i H_i) F x_{k-1} + sum_i K_i y_i over all sensors.
  const Matrix& posterior = run.covariances[idx];
  const Eigen::Index n = s.n();
  Matrix kh = Matrix::Zero(n, n);
  Vector known = Vector::Zero(n);
  for (int i = 0; i < s.model.sensor_count(); ++i) {
    const auto& sensor = s.model.sensors[static_cast<std::size_t>(i)];
    const Matrix gain = posterior * sensor.H.transpose() * matlib::inv(sensor.R);
    kh += gain * sensor.H;
    if (contains(spec.members, i)) known += gain * run.measurements[idx][static_cast<std::size_t>(i)];
  }
  const Vector previous = k == 1 ? s.x_hat0 : run.estimates[idx - 1];
  r.rhs = run.estimates[idx] - (Matrix::Identity(n, n) - kh) * s.model.F * previous - known;
  r.system = outside_gains(s, posterior, outside);
  r.truth = Vector(r.system.cols());
  for (std::size_t c = 0; c < outside.size(); ++c) {
    r.truth.segment(s.p() * static_cast<Eigen::Index>(c), s.p()) =
        run.measurements[idx][static_cast<std::size_t>(outside[c])];
  }
  solve(r);

  for (int t = 1; t <= run.steps; ++t) {
    const Matrix a = outside_gains(s, run.covariances[static_cast<std::size_t>(t) - 1], outside);
    r.stacked_rank += matlib::rank(a);
    r.stacked_unknowns += static_cast<int>(a.cols());
  }
  return r;
}

AttackReport attack_protocol2_query_coalition(const RunResult& run, const CoalitionSpec& spec,
                                              int step) {
  if (run.protocol != Protocol::kGroupDiffusion) {
    throw ValidationError("group-diffusion attack needs a group-diffusion run");
  }
  require_query(spec);
  validate(spec, run.scenario, run.protocol);
  const Scenario& s = run.scenario;
  if (s.private_HR || s.private_FQ) {
    throw AttackInapplicable("the coalition does not hold the sensor or process model");
  }
  const Eigen::Index n = s.n();
  if (matlib::rank(s.model.F) < n) {
    throw AttackInapplicable("F is singular; the fused prior cannot be recovered");
  }
  Matrix f_inv;
  try {
    f_inv = matlib::inv(s.model.F);
  } catch (const SingularMatrixError&) {
    throw AttackInapplicable("F is too ill-conditioned to invert");
  }
  const int k = resolve_step(run, step);
  const auto outside = non_members(spec, s, run.protocol);
  const auto idx = static_cast<std::size_t>(k) - 1;

  AttackReport r;
  r.coalition = spec;
  r.protocol = run.protocol;
  r.step = k;
  r.predicted = check_theorem_conditions(s, run.protocol, spec);

  // Undo the time update, then subtract the members' weighted priors.
  const Vector fused_x = f_inv * run.estimates[idx];
  const Matrix fused_p = matlib::symmetrize(f_inv * (run.covariances[idx] - s.model.Q) *
                                            f_inv.transpose());
  auto public_blocks = [&](int t) {
    const Matrix& previous = t == 1 ? s.P0 : run.covariances[static_cast<std::size_t>(t) - 2];
    std::vector<Matrix> info;
    for (const auto& members : s.groups) {
      info.push_back(matlib::inv(kalman::group_prior_covariance(
          previous, kalman::select_sensors(s.model, members))));
    }
    return info;
  };
  const auto info = public_blocks(k);
  r.rhs = matlib::inv(fused_p) * fused_x;
  for (int j : spec.members) {
    r.rhs -= info[static_cast<std::size_t>(j)] * run.group_priors[idx][static_cast<std::size_t>(j)];
  }
  auto outside_system = [&](const std::vector<Matrix>& blocks) {
    Matrix a(n, n * static_cast<Eigen::Index>(outside.size()));
    for (std::size_t c = 0; c < outside.size(); ++c) {
      a.middleCols(n * static_cast<Eigen::Index>(c), n) = blocks[static_cast<std::size_t>(outside[c])];
    }
    return a;
  };
  r.system = outside_system(info);
  r.truth = Vector(r.system.cols());
  for (std::size_t c = 0; c < outside.size(); ++c) {
    r.truth.segment(n * static_cast<Eigen::Index>(c), n) =
        run.group_priors[idx][static_cast<std::size_t>(outside[c])];
  }
  solve(r);

  for (int t = 1; t <= run.steps; ++t) {
    const Matrix a = outside_system(public_blocks(t));
    r.stacked_rank += matlib::rank(a);
    r.stacked_unknowns += static_cast<int>(a.cols());
  }
  return r;
}

AttackReport attack(const RunResult& run, const CoalitionSpec& spec, int step) {
  return run.protocol == Protocol::kSensorFusion
             ? attack_protocol1_query_coalition(run, spec, step)
             : attack_protocol2_query_coalition(run, spec, step);
}

}  // namespace privkf::privacy
