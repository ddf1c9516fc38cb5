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
#include "privkf/kalman.hpp"

#include <string>

#include "privkf/errors.hpp"

namespace privkf::kalman {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw DimensionMismatchError(what);
}

void check_belief(const SystemModel& model, const Matrix& p, Eigen::Index x_size) {
  require(x_size == model.n() && p.rows() == model.n() && p.cols() == model.n(),
          "belief dimensions do not match state size " + std::to_string(model.n()));
}

}  // namespace

void SystemModel::validate(bool require_spd) const {
  if (F.rows() == 0 || F.rows() != F.cols()) {
    throw ValidationError("F must be square and non-empty");
  }
  if (Q.rows() != F.rows() || Q.cols() != F.cols()) {
    throw ValidationError("Q must be n x n");
  }
  if (!F.allFinite() || !Q.allFinite()) throw ValidationError("F and Q must be finite");
  if (require_spd && !matlib::is_spd(Q)) {
    throw ValidationError("Q must be symmetric positive-definite");
  }
  const Eigen::Index p0 = sensors.empty() ? 0 : sensors.front().H.rows();
  for (std::size_t i = 0; i < sensors.size(); ++i) {
    const auto& s = sensors[i];
    const std::string tag = "sensor " + std::to_string(i);
    if (s.H.cols() != F.rows() || s.H.rows() == 0) {
      throw ValidationError(tag + ": H must be p x n");
    }
    if (s.H.rows() != p0) throw ValidationError(tag + ": measurement size differs");
    if (s.R.rows() != s.H.rows() || s.R.cols() != s.H.rows()) {
      throw ValidationError(tag + ": R must be p x p");
    }
    if (!s.H.allFinite() || !s.R.allFinite()) throw ValidationError(tag + ": non-finite");
    if (require_spd && !matlib::is_spd(s.R)) {
      throw ValidationError(tag + ": R must be symmetric positive-definite");
    }
  }
}

Belief time_update(const SystemModel& model, const Belief& belief) {
  check_belief(model, belief.P, belief.x.size());
  return Belief{model.F * belief.x,
                matlib::symmetrize(model.F * belief.P * model.F.transpose() + model.Q)};
}

EncBelief time_update(const phe::PublicKey& pk, const SystemModel& model,
                      const EncBelief& belief, unsigned frac_bits) {
  check_belief(model, belief.P, static_cast<Eigen::Index>(belief.x.size()));
  return EncBelief{matlib::mat_enc_mul(pk, model.F, belief.x, frac_bits),
                   matlib::symmetrize(model.F * belief.P * model.F.transpose() + model.Q)};
}

namespace {

Eigen::Index reading_size(const Vector& y) { return y.size(); }
Eigen::Index reading_size(const EncVector& y) { return static_cast<Eigen::Index>(y.size()); }

void append(Vector& out, Eigen::Index offset, const Vector& y) {
  out.segment(offset, y.size()) = y;
}
void append(EncVector& out, Eigen::Index, const EncVector& y) {
  out.insert(out.end(), y.begin(), y.end());
}

Matrix stacked_h(std::span<const SensorModel> sensors) {
  const Eigen::Index p = sensors.front().H.rows();
  const Eigen::Index n = sensors.front().H.cols();
  Matrix h(p * static_cast<Eigen::Index>(sensors.size()), n);
  for (std::size_t i = 0; i < sensors.size(); ++i) {
    require(sensors[i].H.rows() == p && sensors[i].H.cols() == n,
            "sensor " + std::to_string(i) + " has a different measurement size");
    h.block(p * static_cast<Eigen::Index>(i), 0, p, n) = sensors[i].H;
  }
  return h;
}

Matrix stacked_r(std::span<const SensorModel> sensors) {
  std::vector<Matrix> blocks;
  blocks.reserve(sensors.size());
  for (const auto& s : sensors) blocks.push_back(s.R);
  return matlib::block_diagonal(blocks);
}

}  // namespace

template <class Y>
StackedMeasurement<Y> stack(std::span<const SensorModel> sensors,
                            std::span<const std::optional<Y>> readings) {
  require(!sensors.empty(), "cannot stack zero sensors");
  require(readings.size() == sensors.size(), "one reading per sensor expected");
  StackedMeasurement<Y> out{Y{}, stacked_h(sensors), stacked_r(sensors)};
  const Eigen::Index p = sensors.front().H.rows();
  if constexpr (std::is_same_v<Y, Vector>) out.y = Vector(out.H.rows());
  for (std::size_t i = 0; i < readings.size(); ++i) {
    if (!readings[i]) {
      throw IncompleteRoundError("missing reading from sensor " + std::to_string(i));
    }
    require(reading_size(*readings[i]) == p,
            "sensor " + std::to_string(i) + " reading has wrong length");
    append(out.y, p * static_cast<Eigen::Index>(i), *readings[i]);
  }
  return out;
}

template StackedMeasurement<Vector> stack(std::span<const SensorModel>,
                                          std::span<const std::optional<Vector>>);
template StackedMeasurement<EncVector> stack(std::span<const SensorModel>,
                                             std::span<const std::optional<EncVector>>);

GainSet parallel_gains(const Matrix& prior_p, std::span<const SensorModel> sensors) {
  const Matrix h = stacked_h(sensors);
  require(h.cols() == prior_p.rows(), "H and P dimensions differ");
  const Matrix r_pinv = matlib::pinv(stacked_r(sensors));
  const Matrix info = matlib::inv(prior_p) + h.transpose() * r_pinv * h;
  GainSet g;
  g.P = matlib::symmetrize(matlib::inv(info));
  g.K = g.P * h.transpose() * r_pinv;
  const Eigen::Index p = sensors.front().H.rows();
  for (std::size_t i = 0; i < sensors.size(); ++i) {
    g.sensor_gains.push_back(g.K.middleCols(p * static_cast<Eigen::Index>(i), p));
  }
  return g;
}

ParallelResult measurement_update_parallel(const Belief& prior,
                                           std::span<const SensorModel> sensors,
                                           const StackedMeasurement<Vector>& stacked) {
  GainSet g = parallel_gains(prior.P, sensors);
  Vector x = prior.x + g.K * (stacked.y - stacked.H * prior.x);
  Matrix p = g.P;
  return ParallelResult{Belief{std::move(x), std::move(p)}, std::move(g)};
}

EncParallelResult measurement_update_parallel(const phe::PublicKey& pk,
                                              const EncBelief& prior,
                                              std::span<const SensorModel> sensors,
                                              const StackedMeasurement<EncVector>& stacked,
                                              unsigned frac_bits) {
  GainSet g = parallel_gains(prior.P, sensors);
  const EncVector predicted = matlib::mat_enc_mul(pk, stacked.H, prior.x, frac_bits);
  const EncVector innovation = matlib::enc_vec_sub(pk, stacked.y, predicted);
  const EncVector correction = matlib::mat_enc_mul(pk, g.K, innovation, frac_bits);
  EncVector x = matlib::enc_vec_add(pk, prior.x, correction);
  Matrix p = g.P;
  return EncParallelResult{EncBelief{std::move(x), std::move(p)}, std::move(g)};
}

Matrix group_prior_covariance(const Matrix& previous_p,
                              std::span<const SensorModel> sensors) {
  if (sensors.empty()) throw IncompleteRoundError("sensor group has no sensors");
  Matrix info = matlib::inv(previous_p);
  for (const auto& s : sensors) {
    require(s.H.cols() == previous_p.rows(), "H and P dimensions differ");
    info += s.H.transpose() * matlib::inv(s.R) * s.H;
  }
  return matlib::symmetrize(matlib::inv(info));
}

GroupResult group_measurement_update(const Belief& previous_global,
                                     std::span<const SensorModel> sensors,
                                     std::span<const Vector> readings) {
  if (sensors.empty()) throw IncompleteRoundError("sensor group has no sensors");
  if (readings.size() != sensors.size()) {
    throw IncompleteRoundError("sensor group is missing readings");
  }
  GroupResult out;
  out.prior.P = group_prior_covariance(previous_global.P, sensors);
  out.prior.x = previous_global.x;
  for (std::size_t i = 0; i < sensors.size(); ++i) {
    const auto& s = sensors[i];
    require(readings[i].size() == s.H.rows(), "reading has wrong length");
    Matrix k = out.prior.P * s.H.transpose() * matlib::inv(s.R);
    out.prior.x += k * (readings[i] - s.H * previous_global.x);
    out.gains.push_back(std::move(k));
  }
  return out;
}

Matrix diffusion_covariance(std::span<const Matrix> prior_covariances) {
  if (prior_covariances.empty()) throw IncompleteRoundError("no group priors to fuse");
  Matrix info = Matrix::Zero(prior_covariances.front().rows(), prior_covariances.front().cols());
  for (const auto& p : prior_covariances) info += matlib::inv(p);
  return matlib::symmetrize(matlib::inv(info));
}

namespace {

std::vector<Matrix> covariances_of(std::span<const Belief> priors) {
  std::vector<Matrix> out;
  for (const auto& b : priors) out.push_back(b.P);
  return out;
}

std::vector<Matrix> covariances_of(std::span<const EncBelief> priors) {
  std::vector<Matrix> out;
  for (const auto& b : priors) out.push_back(b.P);
  return out;
}

}  // namespace

Belief diffusion_update(std::span<const Belief> priors) {
  const auto covs = covariances_of(priors);
  Belief out;
  out.P = diffusion_covariance(covs);
  out.x = Vector::Zero(out.P.rows());
  for (const auto& b : priors) out.x += out.P * matlib::inv(b.P) * b.x;
  return out;
}

EncBelief diffusion_update(const phe::PublicKey& pk, std::span<const EncBelief> priors,
                           unsigned frac_bits) {
  const auto covs = covariances_of(priors);
  EncBelief out;
  out.P = diffusion_covariance(covs);
  // P_a (P_j)^-1 is folded into one plaintext weight per group, so every
  // ciphertext is touched by a single linear map.
  for (const auto& b : priors) {
    const EncVector term = matlib::mat_enc_mul(pk, out.P * matlib::inv(b.P), b.x, frac_bits);
    out.x = out.x.empty() ? term : matlib::enc_vec_add(pk, out.x, term);
  }
  return out;
}

PlantTrace simulate_plant(const SystemModel& model, const Vector& x0, int steps,
                          CoinStream& coins) {
  model.validate(false);
  require(x0.size() == model.n(), "x0 has wrong length");
  auto factor = [](const Matrix& cov) -> std::optional<Matrix> {
    if (cov.isZero(0.0)) return std::nullopt;
    return matlib::cholesky(cov);
  };
  const auto q_factor = factor(model.Q);
  std::vector<std::optional<Matrix>> r_factors;
  for (const auto& s : model.sensors) r_factors.push_back(factor(s.R));

  auto draw = [&coins](const Matrix& l) {
    Vector z(l.cols());
    for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = coins.standard_normal();
    return Vector(l * z);
  };

  PlantTrace trace;
  Vector x = x0;
  for (int k = 0; k < steps; ++k) {
    x = model.F * x;
    if (q_factor) x += draw(*q_factor);
    std::vector<Vector> ys;
    for (std::size_t i = 0; i < model.sensors.size(); ++i) {
      Vector y = model.sensors[i].H * x;
      if (r_factors[i]) y += draw(*r_factors[i]);
      ys.push_back(std::move(y));
    }
    trace.states.push_back(x);
    trace.measurements.push_back(std::move(ys));
  }
  return trace;
}

std::vector<Belief> run_centralized_filter(
    const SystemModel& model, const Belief& initial,
    const std::vector<std::vector<Vector>>& measurements) {
  std::vector<Belief> out;
  Belief current = initial;
  for (const auto& step : measurements) {
    const Belief prior = time_update(model, current);
    std::vector<std::optional<Vector>> readings(step.begin(), step.end());
    const auto stacked = stack<Vector>(model.sensors, readings);
    current = measurement_update_parallel(prior, model.sensors, stacked).posterior;
    out.push_back(current);
  }
  return out;
}

std::vector<SensorModel> select_sensors(const SystemModel& model,
                                        std::span<const int> indices) {
  std::vector<SensorModel> out;
  for (int i : indices) {
    require(i >= 0 && i < model.sensor_count(), "sensor index out of range");
    out.push_back(model.sensors[static_cast<std::size_t>(i)]);
  }
  return out;
}

std::vector<DiffusionStep> run_diffusion_filter(
    const SystemModel& model, const std::vector<std::vector<int>>& groups,
    const Belief& initial, const std::vector<std::vector<Vector>>& measurements) {
  std::vector<DiffusionStep> out;
  Belief global = initial;
  for (const auto& step : measurements) {
    DiffusionStep ds;
    for (const auto& members : groups) {
      const auto sensors = select_sensors(model, members);
      std::vector<Vector> ys;
      for (int i : members) ys.push_back(step[static_cast<std::size_t>(i)]);
      ds.group_priors.push_back(group_measurement_update(global, sensors, ys).prior);
    }
    ds.fused = diffusion_update(ds.group_priors);
    ds.global = time_update(model, ds.fused);
    global = ds.global;
    out.push_back(std::move(ds));
  }
  return out;
}

}  // namespace privkf::kalman
