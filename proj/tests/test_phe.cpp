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
#include <set>

#include <gtest/gtest.h>

#include "privkf/errors.hpp"
#include "privkf/phe.hpp"

namespace privkf::phe {
namespace {

// n = 35 toy key: every plaintext pair can be checked.
class ToyKey : public ::testing::Test {
 protected:
  PrivateKey sk{5, 7};
  const PublicKey& pk = sk.public_key();
  CoinStream coins{7, CoinPurpose::kEncryption};

  RawCiphertext enc(long m) { return encrypt(pk, mpz_class(m), coins); }
  long dec(const RawCiphertext& c) { return decrypt(sk, c).get_si(); }
};

TEST_F(ToyKey, RoundTripsEveryPlaintext) {
  ASSERT_EQ(pk.n(), 35);
  for (long m = 0; m < 35; ++m) EXPECT_EQ(dec(enc(m)), m);
}

TEST_F(ToyKey, AddSubAndScalarAreExhaustivelyModular) {
  for (long a = 0; a < 35; ++a) {
    const auto ca = enc(a);
    for (long b = 0; b < 35; ++b) {
      const auto cb = enc(b);
      ASSERT_EQ(dec(add(pk, ca, cb)), (a + b) % 35);
      ASSERT_EQ(dec(sub(pk, ca, cb)), ((a - b) % 35 + 35) % 35);
      ASSERT_EQ(dec(cmul(pk, mpz_class(b), ca)), (a * b) % 35);
    }
  }
}

TEST_F(ToyKey, WorkedValues) {
  EXPECT_EQ(dec(add(pk, enc(2), enc(3))), 5);
  EXPECT_EQ(dec(add(pk, enc(20), enc(20))), 5);
  EXPECT_EQ(dec(sub(pk, enc(3), enc(5))), 33);
  EXPECT_EQ(dec(sub(pk, enc(7), enc(2))), 5);
  EXPECT_EQ(dec(cmul(pk, 6, enc(7))), 7);
  EXPECT_EQ(dec(cmul(pk, 1, enc(9))), 9);
  EXPECT_EQ(dec(cmul(pk, 0, enc(9))), 0);
  EXPECT_EQ(dec(enc(34)), 34);
}

TEST_F(ToyKey, ScalarIsReducedModN) {
  EXPECT_EQ(dec(cmul(pk, 41, enc(3))), 18);
  EXPECT_EQ(dec(cmul(pk, -1, enc(3))), 32);
}

TEST_F(ToyKey, AddChainOfOnes) {
  RawCiphertext acc = enc(1);
  for (int i = 1; i < 10; ++i) acc = add(pk, acc, enc(1));
  EXPECT_EQ(dec(acc), 10);
}

TEST_F(ToyKey, RejectsOutOfRangePlaintext) {
  EXPECT_THROW(enc(35), PlaintextRangeError);
  EXPECT_THROW(enc(-1), PlaintextRangeError);
}

TEST_F(ToyKey, RejectsNonUnitCiphertext) {
  RawCiphertext c = enc(1);
  c.value = 5;  // shares a factor with n
  EXPECT_THROW(decrypt(sk, c), CiphertextError);
}

TEST(Keygen, EightBitKeyIsDeterministic) {
  CoinStream a(11, CoinPurpose::kKeygen);
  CoinStream b(11, CoinPurpose::kKeygen);
  const KeyPair ka = keygen(8, a);
  const KeyPair kb = keygen(8, b);
  EXPECT_EQ(ka.pk.n(), kb.pk.n());
  EXPECT_EQ(ka.pk.bits(), 8u);
  EXPECT_EQ(ka.sk.p() * ka.sk.q(), ka.pk.n());
  CoinStream c(3, CoinPurpose::kEncryption);
  EXPECT_EQ(decrypt(ka.sk, encrypt(ka.pk, 0, c)), 0);
}

TEST(Keygen, ModulusHasRequestedLength) {
  for (unsigned bits : {16u, 33u, 128u, 512u}) {
    CoinStream coins(bits, CoinPurpose::kKeygen);
    EXPECT_EQ(keygen(bits, coins).pk.bits(), bits);
  }
}

TEST(Keygen, TooShortIsRejected) {
  CoinStream coins(1, CoinPurpose::kKeygen);
  EXPECT_THROW(keygen(4, coins), KeygenError);
}

TEST(PrivateKeyCheck, RejectsEqualOrCompositeFactors) {
  EXPECT_THROW(PrivateKey(7, 7), KeygenError);
  EXPECT_THROW(PrivateKey(9, 7), KeygenError);
}

class Key512 : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    CoinStream coins(2024, CoinPurpose::kKeygen);
    keys_ = new KeyPair(keygen(kTestKeyBits, coins));
  }
  static void TearDownTestSuite() { delete keys_; }
  static KeyPair* keys_;
};
KeyPair* Key512::keys_ = nullptr;

TEST_F(Key512, RandomizedHomomorphism) {
  const auto& [pk, sk] = *keys_;
  CoinStream enc_coins(1, CoinPurpose::kEncryption);
  CoinStream pick(2, CoinPurpose::kSimulator);
  for (int trial = 0; trial < 200; ++trial) {
    const mpz_class a = pick.uniform_below(pk.n());
    const mpz_class b = pick.uniform_below(pk.n());
    const auto ca = encrypt(pk, a, enc_coins);
    const auto cb = encrypt(pk, b, enc_coins);
    mpz_class sum = (a + b) % pk.n();
    mpz_class diff = (a - b) % pk.n();
    if (diff < 0) diff += pk.n();
    mpz_class prod = (a * b) % pk.n();
    ASSERT_EQ(decrypt(sk, add(pk, ca, cb)), sum);
    ASSERT_EQ(decrypt(sk, sub(pk, ca, cb)), diff);
    ASSERT_EQ(decrypt(sk, cmul(pk, b, ca)), prod);
  }
}

TEST_F(Key512, ScalarAboveHalfUsesInverseAndStaysCorrect) {
  const auto& [pk, sk] = *keys_;
  CoinStream coins(3, CoinPurpose::kEncryption);
  const auto c = encrypt(pk, 12345, coins);
  const mpz_class k = pk.n() - 2;  // reads as -2
  EXPECT_EQ(decrypt(sk, cmul(pk, k, c)), pk.n() - 24690);
}

TEST_F(Key512, EncryptionIsProbabilistic) {
  const auto& [pk, sk] = *keys_;
  CoinStream coins(4, CoinPurpose::kEncryption);
  std::set<std::string> seen;
  for (int i = 0; i < 1000; ++i) {
    const auto c = encrypt(pk, 42, coins);
    ASSERT_EQ(decrypt(sk, c), 42);
    seen.insert(c.value.get_str(16));
  }
  EXPECT_EQ(seen.size(), 1000u);
}

TEST_F(Key512, ReRandomizePreservesPlaintext) {
  const auto& [pk, sk] = *keys_;
  CoinStream coins(5, CoinPurpose::kEncryption);
  const auto c = encrypt(pk, 77, coins);
  const auto d = re_randomize(pk, c, coins);
  EXPECT_FALSE(c == d);
  EXPECT_EQ(decrypt(sk, d), 77);
}

TEST_F(Key512, MismatchedKeysAreRejected) {
  const auto& [pk, sk] = *keys_;
  CoinStream kc(99, CoinPurpose::kKeygen);
  const KeyPair other = keygen(64, kc);
  CoinStream coins(6, CoinPurpose::kEncryption);
  const auto a = encrypt(pk, 1, coins);
  const auto b = encrypt(other.pk, 1, coins);
  EXPECT_THROW(add(pk, a, b), KeyMismatchError);
  EXPECT_THROW(cmul(other.pk, 2, a), KeyMismatchError);
}

TEST_F(Key512, SerializationRoundTripsBitExactly) {
  const auto& [pk, sk] = *keys_;
  CoinStream coins(7, CoinPurpose::kEncryption);
  const auto c = encrypt(pk, 5, coins);
  EXPECT_EQ(deserialize_public_key(serialize(pk)), pk);
  const PrivateKey sk2 = deserialize_private_key(serialize(sk));
  EXPECT_EQ(sk2.p(), sk.p());
  EXPECT_EQ(sk2.q(), sk.q());
  EXPECT_EQ(deserialize_ciphertext(serialize(c)), c);
  EXPECT_EQ(serialize(deserialize_ciphertext(serialize(c))), serialize(c));
}

TEST(Determinism, SameSeedsGiveSameKeysAndCiphertexts) {
  auto run = [] {
    CoinStream kc(8, CoinPurpose::kKeygen);
    const KeyPair keys = keygen(256, kc);
    CoinStream ec(9, CoinPurpose::kEncryption);
    return std::make_pair(serialize(keys.sk), serialize(encrypt(keys.pk, 3, ec)));
  };
  EXPECT_EQ(run(), run());
}

TEST(CoinStreams, PurposeAndStreamSeparateSequences) {
  CoinStream a(1, CoinPurpose::kEncryption, 0);
  CoinStream b(1, CoinPurpose::kNoise, 0);
  CoinStream c(1, CoinPurpose::kEncryption, 1);
  CoinStream d(1, CoinPurpose::kEncryption, 0);
  const auto x = a.next_u64();
  EXPECT_NE(x, b.next_u64());
  EXPECT_NE(x, c.next_u64());
  EXPECT_EQ(x, d.next_u64());
}

}  // namespace
}  // namespace privkf::phe
