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
#include "privkf/protocol2.hpp"

#include <algorithm>
#include <string>

#include "privkf/errors.hpp"
#include "privkf/matlib.hpp"
#include "round.hpp"

namespace privkf::protocol2 {

using detail::expect;
using detail::timed;


std::vector<StepCovariances> public_covariances(const Scenario& scenario, int steps) {
  std::vector<StepCovariances> out;
  Matrix global = scenario.P0;
  for (int k = 1; k <= steps; ++k) {
    StepCovariances c;
    for (const auto& members : scenario.groups) {
      c.group_priors.push_back(kalman::group_prior_covariance(
          global, kalman::select_sensors(scenario.model, members)));
    }
    c.fused = kalman::diffusion_covariance(c.group_priors);
    c.global = kalman::time_update(scenario.model,
                                   kalman::Belief{Vector::Zero(scenario.n()), c.fused})
                   .P;
    global = c.global;
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<DeliveryRecord> schedule(const Scenario& scenario, int step) {
  std::vector<DeliveryRecord> out;
  const int groups = static_cast<int>(scenario.groups.size());
  if (step > 0) {
    for (int j = 0; j < groups; ++j) {
      out.push_back({PartyId::group(j), PartyId::aggregator(), step, "GroupPrior", 0});
    }
    out.push_back({PartyId::aggregator(), PartyId::query(), step, "GlobalEncrypted", 0});
  }
  for (int j = 0; j < groups; ++j) {
    out.push_back({PartyId::query(), PartyId::group(j), step, "GlobalPlain", 0});
  }
  return out;
}

namespace views {

void query_setup(Transcript& t, const Scenario& scenario, const phe::KeyPair& keys) {
  t.add_public_key(0, keys.pk);
  t.add_private_key(0, keys.sk);
  t.add_input_vector(0, "x_q0", Quantity::kEstimate, -1, scenario.x_hat0);
  t.add_input_matrix(0, "P_q0", Quantity::kCovariance, -1, scenario.P0);
  record_known_model(t, scenario, {});
}

void group_setup(Transcript& t, const Scenario& scenario, const phe::PublicKey& pk) {
  t.add_public_key(0, pk);
  record_known_model(t, scenario, scenario.groups[static_cast<std::size_t>(t.party().index)]);
}

void aggregator_setup(Transcript& t, const Scenario& scenario, const phe::PublicKey& pk) {
  t.add_public_key(0, pk);
  record_known_model(t, scenario, {});
}

void group_step(Transcript& t, int step, const Scenario& scenario,
                const std::vector<Vector>& readings, const kalman::GroupResult& update,
                const std::vector<mpz_class>& coins) {
  const int j = t.party().index;
  const auto& members = scenario.groups[static_cast<std::size_t>(j)];
  for (std::size_t m = 0; m < members.size(); ++m) {
    t.add_input_vector(step, "y", Quantity::kMeasurement, members[m], readings[m]);
  }
  t.add_computed_matrix(step, "P_prior_g", Quantity::kCovariance, j, update.prior.P);
  for (std::size_t m = 0; m < members.size(); ++m) {
    t.add_computed_matrix(step, "K", Quantity::kGain, members[m], update.gains[m]);
  }
  t.add_computed_vector(step, "x_prior_g", Quantity::kGroupPrior, j, update.prior.x);
  t.add_coins(step, "x_prior_g", CoinPurpose::kEncryption, coins);
}

void group_receive(Transcript& t, int step, const Vector& x, const Matrix& p) {
  t.add_received_vector(step, "x_q", Quantity::kEstimate, -1, PartyId::query(), x);
  t.add_received_matrix(step, "P_q", Quantity::kCovariance, -1, PartyId::query(), p);
}

void aggregator_step(Transcript& t, int step, const std::vector<EncVector>& priors,
                     const StepCovariances& cov, const EncVector& fused,
                     const EncVector& global) {
  for (std::size_t j = 0; j < priors.size(); ++j) {
    const int g = static_cast<int>(j);
    t.add_received_cipher(step, "x_prior_g", Quantity::kGroupPrior, g, PartyId::group(g),
                          priors[j]);
    t.add_received_matrix(step, "P_prior_g", Quantity::kCovariance, g, PartyId::group(g),
                          cov.group_priors[j]);
  }
  t.add_computed_matrix(step, "P_prior", Quantity::kCovariance, -1, cov.fused);
  t.add_computed_cipher(step, "x_prior", Quantity::kEstimate, -1, fused);
  t.add_computed_matrix(step, "P_a", Quantity::kCovariance, -1, cov.global);
  t.add_computed_cipher(step, "x_a", Quantity::kEstimate, -1, global);
}

void query_step(Transcript& t, int step, const EncVector& received, const Matrix& p,
                const Vector& decoded) {
  t.add_received_cipher(step, "x_a", Quantity::kEstimate, -1, PartyId::aggregator(), received);
  t.add_received_matrix(step, "P_a", Quantity::kCovariance, -1, PartyId::aggregator(), p);
  t.add_computed_vector(step, "x_q", Quantity::kEstimate, -1, decoded);
}

}  // namespace views

RunResult run_protocol2(const Scenario& scenario, const RunOptions& options) {
  scenario.validate();
  if (!scenario.grouped()) throw ValidationError("group diffusion needs sensor groups");
  const int groups = static_cast<int>(scenario.groups.size());
  const int steps = scenario.steps;
  const unsigned f = scenario.frac_bits;

  RunResult run;
  run.protocol = Protocol::kGroupDiffusion;
  run.scenario = scenario;
  run.steps = steps;
  RunData data = options.data ? *options.data : prepare_run_data(scenario, steps, 1);
  if (static_cast<int>(data.measurements.size()) < steps) {
    throw ValidationError("run data has fewer readings than steps");
  }
  data.measurements.resize(static_cast<std::size_t>(steps));
  run.measurements = data.measurements;
  for (int k = 1; k <= steps && k < static_cast<int>(data.truth.size()); ++k) {
    run.truth.push_back(data.truth[static_cast<std::size_t>(k)]);
  }
  for (const auto& s : kalman::run_diffusion_filter(scenario.model, scenario.groups,
                                                    kalman::Belief{scenario.x_hat0, scenario.P0},
                                                    data.measurements)) {
    run.reference.push_back(s.global.x);
  }

  CoinStream keygen_coins(scenario.seeds.crypto, CoinPurpose::kKeygen);
  run.keys = phe::keygen(scenario.key_bits, keygen_coins);
  const phe::PublicKey& pk = run.keys.pk;

  std::vector<CoinStream> group_coins;
  for (int j = 0; j < groups; ++j) {
    group_coins.emplace_back(scenario.seeds.crypto, CoinPurpose::kEncryption,
                             coin_stream_id(PartyId::group(j)));
  }

  std::map<PartyId, Transcript*> parties;
  auto open = [&](PartyId id) -> Transcript& {
    Transcript& t = run.transcripts.emplace(id, Transcript(id)).first->second;
    parties[id] = &t;
    return t;
  };
  Transcript& query = open(PartyId::query());
  Transcript& aggregator = open(PartyId::aggregator());
  std::vector<Transcript*> group_views;
  for (int j = 0; j < groups; ++j) group_views.push_back(&open(PartyId::group(j)));

  std::vector<kalman::Belief> group_global(static_cast<std::size_t>(groups));
  MessageBus bus;

  auto broadcast = [&](int step, const Vector& x, const Matrix& p) {
    for (int j = 0; j < groups; ++j) {
      bus.send(Message{PartyId::query(), PartyId::group(j), step, GlobalPlain{x, p}});
    }
  };
  auto groups_receive = [&](int step) {
    for (int j = 0; j < groups; ++j) {
      auto body = [&, j] {
        for (const auto& m : bus.receive(PartyId::group(j), step)) {
          const auto& g = expect<GlobalPlain>(m);
          views::group_receive(*group_views[static_cast<std::size_t>(j)], step, g.x, g.P);
          group_global[static_cast<std::size_t>(j)] = kalman::Belief{g.x, g.P};
        }
      };
      if (step == 0) {
        body();
      } else {
        timed(run, PartyId::group(j), step, body);
      }
    }
  };

  // Round 0: the query node hands the initial estimate to every group.
  views::query_setup(query, scenario, run.keys);
  views::aggregator_setup(aggregator, scenario, pk);
  for (auto* t : group_views) views::group_setup(*t, scenario, pk);
  broadcast(0, scenario.x_hat0, scenario.P0);
  groups_receive(0);
  record_envelopes(bus.log(), 0, parties);
  bus.advance();

  for (int k = 1; k <= steps; ++k) {
    const auto& readings = data.measurements[static_cast<std::size_t>(k) - 1];
    std::vector<Vector> priors_plain(static_cast<std::size_t>(groups));
    std::vector<Matrix> priors_cov(static_cast<std::size_t>(groups));
    for (int j = 0; j < groups; ++j) {
      if (j == options.silent_group && k == options.silent_step) continue;
      const PartyId id = PartyId::group(j);
      timed(run, id, k, [&] {
        const auto& members = scenario.groups[static_cast<std::size_t>(j)];
        std::vector<Vector> ys;
        for (int i : members) ys.push_back(readings[static_cast<std::size_t>(i)]);
        const auto update = kalman::group_measurement_update(
            group_global[static_cast<std::size_t>(j)],
            kalman::select_sensors(scenario.model, members), ys);
        std::vector<mpz_class> drawn;
        EncVector x = matlib::encrypt_vector(pk, update.prior.x, f,
                                             group_coins[static_cast<std::size_t>(j)], &drawn);
        views::group_step(*group_views[static_cast<std::size_t>(j)], k, scenario, ys, update,
                          drawn);
        priors_plain[static_cast<std::size_t>(j)] = update.prior.x;
        priors_cov[static_cast<std::size_t>(j)] = update.prior.P;
        bus.send(Message{id, PartyId::aggregator(), k,
                         GroupPriorMsg{j, std::move(x), update.prior.P}});
      });
    }
    run.group_priors.push_back(priors_plain);
    run.group_prior_covariances.push_back(priors_cov);

    timed(run, PartyId::aggregator(), k, [&] {
      std::vector<std::optional<kalman::EncBelief>> received(static_cast<std::size_t>(groups));
      for (const auto& m : bus.receive(PartyId::aggregator(), k)) {
        const auto& g = expect<GroupPriorMsg>(m);
        if (g.group < 0 || g.group >= groups || m.from != PartyId::group(g.group)) {
          throw IncompleteRoundError("prior from an unknown group");
        }
        received[static_cast<std::size_t>(g.group)] = kalman::EncBelief{g.x, g.P};
      }
      std::vector<kalman::EncBelief> priors;
      StepCovariances cov;
      std::vector<EncVector> ciphers;
      for (int j = 0; j < groups; ++j) {
        auto& r = received[static_cast<std::size_t>(j)];
        if (!r) throw IncompleteRoundError("missing prior from group " + std::to_string(j));
        cov.group_priors.push_back(r->P);
        ciphers.push_back(r->x);
        priors.push_back(std::move(*r));
      }
      const kalman::EncBelief fused = kalman::diffusion_update(pk, priors, f);
      const kalman::EncBelief global = kalman::time_update(pk, scenario.model, fused, f);
      cov.fused = fused.P;
      cov.global = global.P;
      views::aggregator_step(aggregator, k, ciphers, cov, fused.x, global.x);
      run.max_exponent = std::max(run.max_exponent, matlib::uniform_exponent(global.x));
      bus.send(Message{PartyId::aggregator(), PartyId::query(), k,
                       GlobalEncrypted{global.x, global.P}});
    });

    timed(run, PartyId::query(), k, [&] {
      for (const auto& m : bus.receive(PartyId::query(), k)) {
        const auto& g = expect<GlobalEncrypted>(m);
        Vector decoded = matlib::decrypt_vector(run.keys.sk, g.x);
        views::query_step(query, k, g.x, g.P, decoded);
        broadcast(k, decoded, g.P);
        run.estimates.push_back(std::move(decoded));
        run.covariances.push_back(g.P);
      }
    });
    groups_receive(k);

    record_envelopes(bus.log(), k, parties);
    bus.advance();
  }
  run.deliveries = bus.log();
  return run;
}

}  // namespace privkf::protocol2
