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
#include <gtest/gtest.h>

#include "privkf/errors.hpp"
#include "privkf/protocol1.hpp"
#include "privkf/protocol2.hpp"
#include "support.hpp"

namespace privkf {
namespace {

Matrix scalar(double v) { return Matrix::Constant(1, 1, v); }
Vector scalar_vec(double v) { return Vector::Constant(1, v); }

// F = 1, Q = P0 = 0.5, two sensors with R = 2: the prior covariance is 1, the
// posterior 1/2 and each sensor's gain 1/4.
Scenario hand_scenario() {
  Scenario s;
  s.model.F = scalar(1.0);
  s.model.Q = scalar(0.5);
  s.model.sensors = {{scalar(1.0), scalar(2.0)}, {scalar(1.0), scalar(2.0)}};
  s.x0 = scalar_vec(2.0);
  s.x_hat0 = scalar_vec(2.0);
  s.P0 = scalar(0.5);
  s.steps = 1;
  s.key_bits = 512;
  return s;
}

double worst(const std::vector<Vector>& a, const std::vector<Vector>& b) {
  double w = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) w = std::max(w, (a[k] - b[k]).cwiseAbs().maxCoeff());
  return w;
}

TEST(SensorFusion, HandComputedSingleRound) {
  protocol1::RunOptions opt;
  opt.data = RunData{{scalar_vec(3.0)}, {{scalar_vec(4.0), scalar_vec(6.0)}}};
  const RunResult r = protocol1::run_protocol1(hand_scenario(), opt);
  ASSERT_EQ(r.estimates.size(), 1u);
  EXPECT_NEAR(r.estimates[0](0), 2.0 + 0.25 * (4.0 - 2.0) + 0.25 * (6.0 - 2.0), 1e-9);
  EXPECT_NEAR(r.covariances[0](0, 0), 0.5, 1e-15);
}

TEST(SensorFusion, MatchesPlaintextFilter) {
  const RunResult r = protocol1::run_protocol1(testing::tracking_scenario(4, 15));
  EXPECT_LE(worst(r.estimates, r.reference), 1e-6);
  EXPECT_LE(r.max_reference_deviation(), 1e-6);
  EXPECT_EQ(r.truth.size(), 15u);
}

TEST(SensorFusion, NeedsTwoSensors) {
  EXPECT_THROW(protocol1::run_protocol1(testing::tracking_scenario(1, 2)), ValidationError);
}

TEST(SensorFusion, ExponentScheduleWithRefresh) {
  EXPECT_EQ(protocol1::estimate_exponent(40, 0, true), 40u);
  EXPECT_EQ(protocol1::estimate_exponent(40, 7, true), 160u);
  EXPECT_EQ(protocol1::estimate_exponent(40, 2, false), 280u);
  EXPECT_EQ(protocol1::prior_exponent(40, 1, true), 80u);
  Scenario s = hand_scenario();
  s.steps = 100;
  const RunResult r = protocol1::run_protocol1(s);
  EXPECT_EQ(r.max_exponent, 160u);
  EXPECT_LE(r.max_exponent, 512u - kExponentGuardBits);
}

// Without refresh every round multiplies the estimate by one more encoded
// matrix pair, growing its exponent by 3f from f.
TEST(SensorFusion, RefreshOffOverflowsAtPredictedRound) {
  for (unsigned bits : {512u, 1024u}) {
    const unsigned f = 40;
    const unsigned budget = bits - kExponentGuardBits;
    int oracle = 1;
    while (f + 3 * f * static_cast<unsigned>(oracle) <= budget) ++oracle;
    ASSERT_EQ(protocol1::first_overflow_step(bits, f), oracle);
    EXPECT_LE(oracle, static_cast<int>((budget + f - 1) / f));

    Scenario s = hand_scenario();
    s.key_bits = bits;
    s.refresh = false;
    s.steps = oracle - 1;
    const RunResult ok = protocol1::run_protocol1(s);
    EXPECT_LE(worst(ok.estimates, ok.reference), 1e-6);
    s.steps = oracle;
    EXPECT_THROW(protocol1::run_protocol1(s), ExponentBudgetExceeded);
  }
}

TEST(SensorFusion, QueryRefreshKeepsTheValue) {
  CoinStream kc(5, CoinPurpose::kKeygen);
  const phe::KeyPair keys = phe::keygen(512, kc);
  CoinStream coins(6, CoinPurpose::kEncryption);
  Vector v(3);
  v << 0.0, -1.25, 3.5;
  EncVector x = matlib::encrypt_vector(keys.pk, v, 40, coins);
  x = matlib::mat_enc_mul(keys.pk, Matrix::Identity(3, 3), x, 40);
  const protocol1::Refresh fresh = protocol1::query_refresh(keys.sk, x, 40, coins);
  EXPECT_EQ(matlib::uniform_exponent(fresh.x), 40u);
  EXPECT_EQ(matlib::decrypt_vector(keys.sk, fresh.x), v);
  EXPECT_EQ(fresh.decoded, v);
  EXPECT_EQ(fresh.coins.size(), 3u);
}

TEST(SensorFusion, SilentSensorStallsTheRound) {
  protocol1::RunOptions opt;
  opt.silent_sensor = 1;
  opt.silent_step = 2;
  EXPECT_THROW(protocol1::run_protocol1(testing::tracking_scenario(3, 3), opt),
               IncompleteRoundError);
}

TEST(SensorFusion, MessageCountsFollowSchedule) {
  Scenario s = testing::tracking_scenario(4, 3);
  const RunResult r = protocol1::run_protocol1(s);
  EXPECT_EQ(r.messages_in_step(0), 1u);
  for (int k = 1; k <= 3; ++k) {
    EXPECT_EQ(r.messages_in_step(k), 4u + 1u + 1u);
    const auto plan = protocol1::schedule(s, k);
    std::size_t i = 0;
    for (const auto& d : r.deliveries) {
      if (d.step != k) continue;
      ASSERT_LT(i, plan.size());
      EXPECT_EQ(d.from, plan[i].from);
      EXPECT_EQ(d.to, plan[i].to);
      EXPECT_EQ(d.kind, plan[i].kind);
      ++i;
    }
    EXPECT_EQ(i, plan.size());
  }
  s.refresh = false;
  s.steps = 2;
  EXPECT_EQ(protocol1::run_protocol1(s).messages_in_step(1), 4u + 1u);
}

TEST(SensorFusion, ViewsHoldOnlyWhatEachPartyMaySee) {
  const RunResult r = protocol1::run_protocol1(testing::tracking_scenario(3, 3));
  for (const auto& e : r.transcripts.at(PartyId::aggregator()).entries()) {
    if (e.quantity == Quantity::kMeasurement || e.quantity == Quantity::kEstimate) {
      EXPECT_EQ(e.type, FieldType::kCipherVector) << e.shape();
    }
    EXPECT_NE(e.type, FieldType::kPrivateKey);
  }
  for (int i = 0; i < 3; ++i) {
    for (const auto& e : r.transcripts.at(PartyId::sensor(i)).entries()) {
      if (e.quantity == Quantity::kMeasurement) {
        EXPECT_EQ(e.subject, i) << e.shape();
      }
      EXPECT_NE(e.kind, EntryKind::kReceived) << e.shape();
      EXPECT_NE(e.type, FieldType::kPrivateKey);
    }
  }
}

TEST(SensorFusion, ReplayIsByteIdentical) {
  const Scenario s = testing::tracking_scenario(3, 4);
  const RunResult a = protocol1::run_protocol1(s);
  const RunResult b = protocol1::run_protocol1(s);
  EXPECT_EQ(a.estimates, b.estimates);
  for (const auto& [id, t] : a.transcripts) EXPECT_EQ(t.serialize(), b.transcripts.at(id).serialize());
  Scenario other = s;
  other.seeds.crypto += 1;
  const RunResult c = protocol1::run_protocol1(other);
  EXPECT_NE(a.transcripts.at(PartyId::query()).serialize(),
            c.transcripts.at(PartyId::query()).serialize());
}

Scenario grouped(int groups, int per_group, int steps) {
  Scenario s = testing::tracking_scenario(groups * per_group, steps);
  for (int j = 0; j < groups; ++j) {
    auto& g = s.groups.emplace_back();
    for (int i = 0; i < per_group; ++i) g.push_back(j * per_group + i);
  }
  return s;
}

TEST(GroupDiffusion, MatchesPlaintextDiffusionFilter) {
  const RunResult r = protocol2::run_protocol2(grouped(3, 2, 15));
  EXPECT_LE(worst(r.estimates, r.reference), 1e-6);
  EXPECT_EQ(r.max_exponent, 120u);
  EXPECT_EQ(r.group_priors.size(), 15u);
  EXPECT_EQ(r.group_priors[0].size(), 3u);
}

TEST(GroupDiffusion, NeedsGroups) {
  EXPECT_THROW(protocol2::run_protocol2(testing::tracking_scenario(4, 2)), ValidationError);
}

// One group holding every sensor runs the same recursion as sensor fusion,
// one time update later: with P0 = F F^T + Q the sensor-fusion run starting
// from (F^-1 x0, I) sees the same first prior.
TEST(GroupDiffusion, SingleGroupMatchesSensorFusion) {
  Scenario s2 = testing::generic_scenario(3, 4, 2, 3, 10);
  s2.groups = {{0, 1, 2}};
  const Matrix& F = s2.model.F;
  s2.P0 = F * F.transpose() + s2.model.Q;
  s2.x_hat0 = Vector::LinSpaced(4, -1.0, 2.0);
  Scenario s1 = s2;
  s1.groups.clear();
  s1.P0 = Matrix::Identity(4, 4);
  s1.x_hat0 = F.inverse() * s2.x_hat0;

  const RunData data = prepare_run_data(s2, 10, 1);
  protocol1::RunOptions o1;
  o1.data = data;
  protocol2::RunOptions o2;
  o2.data = data;
  const RunResult r1 = protocol1::run_protocol1(s1, o1);
  const RunResult r2 = protocol2::run_protocol2(s2, o2);
  for (int k = 0; k < 10; ++k) {
    EXPECT_LE((r2.estimates[k] - F * r1.estimates[k]).cwiseAbs().maxCoeff(), 1e-6);
    EXPECT_LE(matlib::max_abs(r2.covariances[k] -
                              (F * r1.covariances[k] * F.transpose() + s2.model.Q)),
              1e-9);
  }
}

TEST(GroupDiffusion, SilentGroupStallsTheRound) {
  protocol2::RunOptions opt;
  opt.silent_group = 0;
  opt.silent_step = 1;
  EXPECT_THROW(protocol2::run_protocol2(grouped(2, 2, 2), opt), IncompleteRoundError);
}

TEST(GroupDiffusion, MessageCountsFollowSchedule) {
  const RunResult r = protocol2::run_protocol2(grouped(3, 2, 3));
  EXPECT_EQ(r.messages_in_step(0), 3u);
  for (int k = 1; k <= 3; ++k) EXPECT_EQ(r.messages_in_step(k), 3u + 1u + 3u);
}

TEST(GroupDiffusion, ViewsKeepGroupDataInside) {
  const RunResult r = protocol2::run_protocol2(grouped(3, 2, 3));
  for (const auto& e : r.transcripts.at(PartyId::aggregator()).entries()) {
    if (e.quantity == Quantity::kEstimate || e.quantity == Quantity::kGroupPrior) {
      EXPECT_EQ(e.type, FieldType::kCipherVector) << e.shape();
    }
    EXPECT_NE(e.quantity, Quantity::kMeasurement);
  }
  for (int j = 0; j < 3; ++j) {
    for (const auto& e : r.transcripts.at(PartyId::group(j)).entries()) {
      if (e.quantity == Quantity::kMeasurement) {
        EXPECT_TRUE(e.subject == 2 * j || e.subject == 2 * j + 1) << e.shape();
      }
      if (e.quantity == Quantity::kGroupPrior) {
        EXPECT_EQ(e.subject, j) << e.shape();
      }
    }
  }
}

TEST(GroupDiffusion, ReplayIsByteIdentical) {
  const Scenario s = grouped(2, 2, 3);
  const RunResult a = protocol2::run_protocol2(s);
  const RunResult b = protocol2::run_protocol2(s);
  EXPECT_EQ(a.estimates, b.estimates);
  for (const auto& [id, t] : a.transcripts) EXPECT_EQ(t.serialize(), b.transcripts.at(id).serialize());
}

TEST(GroupDiffusion, PublicCovariancesMatchTheRun) {
  const Scenario s = grouped(3, 2, 2);
  const RunResult r = protocol2::run_protocol2(s);
  const auto cov = protocol2::public_covariances(s, 2);
  for (int k = 0; k < 2; ++k) {
    EXPECT_EQ(cov[k].global, r.covariances[k]);
    EXPECT_EQ(cov[k].group_priors[1], r.group_prior_covariances[k][1]);
  }
}

}  // namespace
}  // namespace privkf
