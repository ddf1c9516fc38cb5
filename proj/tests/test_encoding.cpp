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
#include <cmath>
#include <cstdint>
#include <random>

#include <gtest/gtest.h>

#include "privkf/encoding.hpp"
#include "privkf/errors.hpp"

namespace privkf {
namespace {

class Codec : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    CoinStream coins(31, CoinPurpose::kKeygen);
    keys_ = new phe::KeyPair(phe::keygen(phe::kTestKeyBits, coins));
  }
  static void TearDownTestSuite() { delete keys_; }
  static phe::KeyPair* keys_;
  const phe::PublicKey& pk() const { return keys_->pk; }
  const phe::PrivateKey& sk() const { return keys_->sk; }
  CoinStream coins{32, CoinPurpose::kEncryption};
};
phe::KeyPair* Codec::keys_ = nullptr;

TEST_F(Codec, ZeroHasZeroMantissa) {
  for (unsigned f : {0u, 1u, 40u}) EXPECT_EQ(encode(0.0, f, pk()).mantissa, 0);
}

TEST_F(Codec, NegativeValuesWrapToUpperHalf) {
  const Encoded e = encode(-1.5, 1, pk());
  EXPECT_EQ(e.mantissa, pk().n() - 3);
  EXPECT_EQ(e.exponent, 1u);
  EXPECT_EQ(signed_value(e.mantissa, pk()), -3);
  EXPECT_EQ(decode(e, pk()), -1.5);
}

TEST_F(Codec, RoundTripErrorIsHalfAnUlp) {
  std::mt19937_64 g(1);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double x = u(g);
    worst = std::max(worst, std::abs(decode(encode(x, 40, pk()), pk()) - x));
  }
  EXPECT_LE(worst, std::ldexp(1.0, -41));
}

TEST_F(Codec, EncryptedRoundTrip) {
  for (double x : {0.0, 1.0, -2.25, 123.456, -987.654321}) {
    EXPECT_NEAR(decrypt_value(sk(), encrypt_value(pk(), x, 40, coins)), x, std::ldexp(1.0, -41));
  }
}

TEST_F(Codec, OversizedValuesOverflow) {
  EXPECT_THROW(encode(std::ldexp(1.0, 500), 40, pk()), EncodeOverflowError);
  EXPECT_THROW(encode(std::nan(""), 40, pk()), EncodeOverflowError);
}

TEST_F(Codec, AddAlignsToLargerExponent) {
  const Ciphertext a = encrypt_value(pk(), 1.25, 2, coins);
  const Ciphertext b = encrypt_value(pk(), -0.40625, 5, coins);
  const Ciphertext c = enc_add(pk(), a, b);
  EXPECT_EQ(c.exponent, 5u);
  EXPECT_EQ(decrypt_value(sk(), c), 1.25 - 0.40625);
  EXPECT_EQ(enc_add(pk(), b, a).exponent, 5u);
}

TEST_F(Codec, AddOfZeroIsIdentity) {
  const Ciphertext x = encrypt_value(pk(), 3.75, 40, coins);
  const Ciphertext z = encrypt_value(pk(), 0.0, 40, coins);
  EXPECT_EQ(decrypt_value(sk(), enc_add(pk(), z, x)), 3.75);
  EXPECT_EQ(decrypt_value(sk(), enc_sub(pk(), x, x)), 0.0);
}

TEST_F(Codec, HundredTermSumMatchesPlaintextAccumulator) {
  std::mt19937_64 g(2);
  std::uniform_real_distribution<double> u(-100.0, 100.0);
  // The accumulator sums the same fixed-point mantissas in exact integer arithmetic.
  std::int64_t mantissas = 0;
  double plain = 0.0;
  Ciphertext acc = encrypt_value(pk(), 0.0, 40, coins);
  for (int i = 0; i < 100; ++i) {
    const double x = u(g);
    mantissas += std::llround(std::ldexp(x, 40));
    plain += x;
    acc = enc_add(pk(), acc, encrypt_value(pk(), x, 40, coins));
  }
  const double decoded = decrypt_value(sk(), acc);
  EXPECT_NEAR(decoded, std::ldexp(static_cast<double>(mantissas), -40), std::ldexp(1.0, -39));
  // Each term rounds by at most half a unit in the last fixed-point place.
  EXPECT_NEAR(decoded, plain, 100 * std::ldexp(1.0, -41) + 1e-12);
}

TEST_F(Codec, ScalarMultiplyAddsExponents) {
  const Ciphertext c = encrypt_value(pk(), 3.5, 40, coins);
  const Ciphertext one = enc_cmul(pk(), encode(1.0, 0, pk()), c);
  EXPECT_EQ(one.exponent, 40u);
  EXPECT_EQ(decrypt_value(sk(), one), 3.5);
  const Ciphertext two = enc_cmul(pk(), encode(2.0, 0, pk()), c);
  EXPECT_EQ(decrypt_value(sk(), two), 7.0);
  const Ciphertext scaled = enc_cmul(pk(), encode(-0.3, 40, pk()), c);
  EXPECT_EQ(scaled.exponent, 80u);
  EXPECT_NEAR(decrypt_value(sk(), scaled), -1.05, 1e-11);
}

TEST_F(Codec, ExponentBudgetIsKeyBitsMinusGuard) {
  EXPECT_EQ(exponent_budget(pk()), phe::kTestKeyBits - kExponentGuardBits);
  Ciphertext c = encrypt_value(pk(), 1.0, 40, coins);
  const Encoded k = encode(1.0, 40, pk());
  for (int i = 0; i < 10; ++i) c = enc_cmul(pk(), k, c);  // 440 <= 448
  EXPECT_EQ(c.exponent, 440u);
  EXPECT_THROW(enc_cmul(pk(), k, c), ExponentBudgetExceeded);
}

TEST_F(Codec, SerializationCarriesExponent) {
  const Ciphertext c = encrypt_value(pk(), -8.5, 300, coins);
  const Ciphertext d = deserialize_encrypted(serialize(c));
  EXPECT_EQ(d.exponent, 300u);
  EXPECT_TRUE(d.raw == c.raw);
}

}  // namespace
}  // namespace privkf
