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
#include "privkf/protocol1.hpp"

#include <algorithm>
#include <string>

#include "privkf/errors.hpp"
#include "privkf/matlib.hpp"
#include "round.hpp"

namespace privkf::protocol1 {

using detail::expect;
using detail::timed;

namespace {

unsigned update_growth(unsigned f) { return 3 * f; }

}  // namespace

Refresh query_refresh(const phe::PrivateKey& sk, const EncVector& x, unsigned frac_bits,
                      CoinStream& coins) {
  Refresh out;
  out.decoded = matlib::decrypt_vector(sk, x);
  out.x = matlib::encrypt_vector(sk.public_key(), out.decoded, frac_bits, coins, &out.coins);
  return out;
}

unsigned estimate_exponent(unsigned frac_bits, int step, bool refresh) {
  if (step <= 0) return frac_bits;
  if (refresh) return frac_bits + update_growth(frac_bits);
  return frac_bits + update_growth(frac_bits) * static_cast<unsigned>(step);
}

unsigned prior_exponent(unsigned frac_bits, int step, bool refresh) {
  const unsigned input = refresh ? frac_bits : estimate_exponent(frac_bits, step - 1, false);
  return input + frac_bits;
}

int first_overflow_step(unsigned key_bits, unsigned frac_bits) {
  const unsigned budget = key_bits > kExponentGuardBits ? key_bits - kExponentGuardBits : 0;
  if (budget < frac_bits + update_growth(frac_bits)) return 1;
  return static_cast<int>((budget - frac_bits) / update_growth(frac_bits)) + 1;
}

std::vector<StepCovariances> public_covariances(const Scenario& scenario, int steps) {
  std::vector<StepCovariances> out;
  kalman::Belief current{Vector::Zero(scenario.n()), scenario.P0};
  for (int k = 1; k <= steps; ++k) {
    const kalman::Belief prior = kalman::time_update(scenario.model, current);
    StepCovariances c{prior.P, kalman::parallel_gains(prior.P, scenario.model.sensors)};
    current.P = c.gains.P;
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<DeliveryRecord> schedule(const Scenario& scenario, int step) {
  std::vector<DeliveryRecord> out;
  if (step == 0) {
    out.push_back({PartyId::query(), PartyId::aggregator(), 0, "InitEstimate", 0});
    return out;
  }
  for (int i = 0; i < scenario.model.sensor_count(); ++i) {
    out.push_back({PartyId::sensor(i), PartyId::aggregator(), step, "SensorReading", 0});
  }
  out.push_back({PartyId::aggregator(), PartyId::query(), step, "Estimate", 0});
  if (scenario.refresh) {
    out.push_back({PartyId::query(), PartyId::aggregator(), step, "Refresh", 0});
  }
  return out;
}

namespace views {

void query_setup(Transcript& t, const Scenario& scenario, const phe::KeyPair& keys,
                 const std::vector<mpz_class>& coins) {
  t.add_public_key(0, keys.pk);
  t.add_private_key(0, keys.sk);
  t.add_input_vector(0, "x_q0", Quantity::kEstimate, -1, scenario.x_hat0);
  t.add_input_matrix(0, "P_q0", Quantity::kCovariance, -1, scenario.P0);
  record_known_model(t, scenario, {});
  t.add_coins(0, "x_q0", CoinPurpose::kEncryption, coins);
}

void aggregator_setup(Transcript& t, const Scenario& scenario, const phe::PublicKey& pk,
                      const EncVector& initial) {
  t.add_public_key(0, pk);
  record_known_model(t, scenario, {});
  t.add_received_cipher(0, "x_a0", Quantity::kEstimate, -1, PartyId::query(), initial);
  t.add_received_matrix(0, "P_a0", Quantity::kCovariance, -1, PartyId::query(), scenario.P0);
}

void sensor_setup(Transcript& t, const Scenario& scenario, const phe::PublicKey& pk) {
  t.add_public_key(0, pk);
  record_known_model(t, scenario, {t.party().index});
}

void sensor_step(Transcript& t, int step, const Vector& y, const std::vector<mpz_class>& coins) {
  const int i = t.party().index;
  t.add_input_vector(step, "y", Quantity::kMeasurement, i, y);
  t.add_coins(step, "y", CoinPurpose::kEncryption, coins);
}

void aggregator_step(Transcript& t, int step, const Scenario& scenario,
                     const std::vector<EncVector>& readings, const StepCovariances& cov,
                     const EncVector& prior, const EncVector& posterior) {
  for (std::size_t i = 0; i < readings.size(); ++i) {
    const int s = static_cast<int>(i);
    t.add_received_cipher(step, "y", Quantity::kMeasurement, s, PartyId::sensor(s), readings[i]);
    t.add_received_matrix(step, "R", Quantity::kNoiseCovariance, s, PartyId::sensor(s),
                          scenario.model.sensors[i].R);
  }
  t.add_computed_matrix(step, "P_prior", Quantity::kCovariance, -1, cov.prior);
  t.add_computed_cipher(step, "x_prior", Quantity::kEstimate, -1, prior);
  t.add_computed_matrix(step, "P_a", Quantity::kCovariance, -1, cov.gains.P);
  t.add_computed_matrix(step, "K", Quantity::kGain, -1, cov.gains.K);
  t.add_computed_cipher(step, "x_a", Quantity::kEstimate, -1, posterior);
}

void aggregator_refresh(Transcript& t, int step, const EncVector& x) {
  t.add_received_cipher(step, "x_refresh", Quantity::kEstimate, -1, PartyId::query(), x);
}

void query_step(Transcript& t, int step, const EncVector& received, const Matrix& p,
                const Vector& decoded, const std::vector<mpz_class>& refresh_coins) {
  t.add_received_cipher(step, "x_a", Quantity::kEstimate, -1, PartyId::aggregator(), received);
  t.add_received_matrix(step, "P_a", Quantity::kCovariance, -1, PartyId::aggregator(), p);
  t.add_computed_vector(step, "x_q", Quantity::kEstimate, -1, decoded);
  if (!refresh_coins.empty()) {
    t.add_coins(step, "x_refresh", CoinPurpose::kEncryption, refresh_coins);
  }
}

}  // namespace views

RunResult run_protocol1(const Scenario& scenario, const RunOptions& options) {
  scenario.validate();
  const int sensors = scenario.model.sensor_count();
  if (sensors < 2) throw ValidationError("sensor fusion needs at least two sensors");
  const int steps = scenario.steps;
  const unsigned f = scenario.frac_bits;

  RunResult run;
  run.protocol = Protocol::kSensorFusion;
  run.scenario = scenario;
  run.steps = steps;
  RunData data = options.data ? *options.data : prepare_run_data(scenario, steps);
  if (static_cast<int>(data.measurements.size()) < steps) {
    throw ValidationError("run data has fewer readings than steps");
  }
  data.measurements.resize(static_cast<std::size_t>(steps));
  run.measurements = data.measurements;
  run.truth.assign(data.truth.begin(),
                   data.truth.begin() + std::min<std::ptrdiff_t>(steps, std::ssize(data.truth)));
  for (const auto& b : kalman::run_centralized_filter(
           scenario.model, kalman::Belief{scenario.x_hat0, scenario.P0}, data.measurements)) {
    run.reference.push_back(b.x);
  }

  CoinStream keygen_coins(scenario.seeds.crypto, CoinPurpose::kKeygen);
  run.keys = phe::keygen(scenario.key_bits, keygen_coins);
  const phe::PublicKey& pk = run.keys.pk;

  auto coins_for = [&](PartyId id) {
    return CoinStream(scenario.seeds.crypto, CoinPurpose::kEncryption, coin_stream_id(id));
  };
  CoinStream query_coins = coins_for(PartyId::query());
  std::vector<CoinStream> sensor_coins;
  for (int i = 0; i < sensors; ++i) sensor_coins.push_back(coins_for(PartyId::sensor(i)));

  std::map<PartyId, Transcript*> parties;
  auto open = [&](PartyId id) -> Transcript& {
    Transcript& t = run.transcripts.emplace(id, Transcript(id)).first->second;
    parties[id] = &t;
    return t;
  };
  Transcript& query = open(PartyId::query());
  Transcript& aggregator = open(PartyId::aggregator());
  std::vector<Transcript*> sensor_views;
  for (int i = 0; i < sensors; ++i) sensor_views.push_back(&open(PartyId::sensor(i)));

  MessageBus bus;
  kalman::EncBelief state;

  // Round 0: the query node hands the encrypted initial estimate over.
  {
    std::vector<mpz_class> drawn;
    EncVector x0 = matlib::encrypt_vector(pk, scenario.x_hat0, f, query_coins, &drawn);
    views::query_setup(query, scenario, run.keys, drawn);
    for (auto* t : sensor_views) views::sensor_setup(*t, scenario, pk);
    bus.send(Message{PartyId::query(), PartyId::aggregator(), 0,
                     InitEstimate{std::move(x0), scenario.P0}});
    for (const auto& m : bus.receive(PartyId::aggregator(), 0)) {
      const auto& init = expect<InitEstimate>(m);
      views::aggregator_setup(aggregator, scenario, pk, init.x);
      state = kalman::EncBelief{init.x, init.P};
    }
    record_envelopes(bus.log(), 0, parties);
    bus.advance();
  }

  for (int k = 1; k <= steps; ++k) {
    const auto& readings = data.measurements[static_cast<std::size_t>(k) - 1];
    for (int i = 0; i < sensors; ++i) {
      if (i == options.silent_sensor && k == options.silent_step) continue;
      const PartyId id = PartyId::sensor(i);
      timed(run, id, k, [&] {
        std::vector<mpz_class> drawn;
        EncVector y = matlib::encrypt_vector(pk, readings[static_cast<std::size_t>(i)], f,
                                             sensor_coins[static_cast<std::size_t>(i)], &drawn);
        views::sensor_step(*sensor_views[static_cast<std::size_t>(i)], k,
                           readings[static_cast<std::size_t>(i)], drawn);
        bus.send(Message{id, PartyId::aggregator(), k,
                         SensorReading{i, std::move(y),
                                       scenario.model.sensors[static_cast<std::size_t>(i)].R}});
      });
    }

    timed(run, PartyId::aggregator(), k, [&] {
      std::vector<std::optional<EncVector>> received(static_cast<std::size_t>(sensors));
      std::vector<kalman::SensorModel> models = scenario.model.sensors;
      for (const auto& m : bus.receive(PartyId::aggregator(), k)) {
        const auto& r = expect<SensorReading>(m);
        if (r.sensor < 0 || r.sensor >= sensors || m.from != PartyId::sensor(r.sensor)) {
          throw IncompleteRoundError("reading from an unknown sensor");
        }
        received[static_cast<std::size_t>(r.sensor)] = r.y;
        models[static_cast<std::size_t>(r.sensor)].R = r.R;
      }
      const auto stacked = kalman::stack<EncVector>(models, received);
      const kalman::EncBelief prior = kalman::time_update(pk, scenario.model, state, f);
      auto result = kalman::measurement_update_parallel(pk, prior, models, stacked, f);
      std::vector<EncVector> ys;
      for (auto& r : received) ys.push_back(std::move(*r));
      views::aggregator_step(aggregator, k, scenario, ys, StepCovariances{prior.P, result.gains},
                             prior.x, result.posterior.x);
      state = std::move(result.posterior);
      run.max_exponent = std::max(run.max_exponent, matlib::uniform_exponent(state.x));
      bus.send(Message{PartyId::aggregator(), PartyId::query(), k, EstimateMsg{state.x, state.P}});
    });

    timed(run, PartyId::query(), k, [&] {
      for (const auto& m : bus.receive(PartyId::query(), k)) {
        const auto& est = expect<EstimateMsg>(m);
        if (scenario.refresh) {
          Refresh r = query_refresh(run.keys.sk, est.x, f, query_coins);
          views::query_step(query, k, est.x, est.P, r.decoded, r.coins);
          run.estimates.push_back(r.decoded);
          bus.send(Message{PartyId::query(), PartyId::aggregator(), k, RefreshMsg{std::move(r.x)}});
        } else {
          Vector decoded = matlib::decrypt_vector(run.keys.sk, est.x);
          views::query_step(query, k, est.x, est.P, decoded, {});
          run.estimates.push_back(std::move(decoded));
        }
        run.covariances.push_back(est.P);
      }
    });

    if (scenario.refresh) {
      timed(run, PartyId::aggregator(), k, [&] {
        for (const auto& m : bus.receive(PartyId::aggregator(), k)) {
          const auto& r = expect<RefreshMsg>(m);
          views::aggregator_refresh(aggregator, k, r.x);
          state.x = r.x;
        }
      });
    }

    record_envelopes(bus.log(), k, parties);
    bus.advance();
  }
  run.deliveries = bus.log();
  return run;
}

}  // namespace privkf::protocol1
