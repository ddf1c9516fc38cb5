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

// Paillier additively homomorphic cryptosystem with generator g = n + 1.

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "privkf/coins.hpp"

namespace privkf::phe {

using Bytes = std::vector<std::uint8_t>;

class PublicKey {
 public:
  PublicKey() = default;
  explicit PublicKey(mpz_class n);

  const mpz_class& n() const { return n_; }
  const mpz_class& n_squared() const { return n2_; }
  mpz_class g() const { return n_ + 1; }
  // Floor of n/2; plaintexts above it read as negative.
  const mpz_class& half_n() const { return half_; }
  unsigned bits() const { return bits_; }
  // 64-bit fingerprint of n stamped on every ciphertext.
  std::uint64_t tag() const { return tag_; }

  friend bool operator==(const PublicKey& a, const PublicKey& b) {
    return a.n_ == b.n_;
  }

 private:
  mpz_class n_;
  mpz_class n2_;
  mpz_class half_;
  unsigned bits_ = 0;
  std::uint64_t tag_ = 0;
};

class PrivateKey {
 public:
  PrivateKey() = default;
  // Validates that p and q are distinct primes with gcd(pq, (p-1)(q-1)) = 1.
  PrivateKey(mpz_class p, mpz_class q);

  const mpz_class& p() const { return p_; }
  const mpz_class& q() const { return q_; }
  const mpz_class& lambda() const { return lambda_; }
  const mpz_class& mu() const { return mu_; }
  const PublicKey& public_key() const { return pk_; }

 private:
  mpz_class p_, q_, lambda_, mu_;
  PublicKey pk_;
};

struct RawCiphertext {
  mpz_class value;
  std::uint64_t key_tag = 0;

  friend bool operator==(const RawCiphertext& a, const RawCiphertext& b) {
    return a.key_tag == b.key_tag && a.value == b.value;
  }
};

struct KeyPair {
  PublicKey pk;
  PrivateKey sk;
};

inline constexpr unsigned kTestKeyBits = 512;
inline constexpr unsigned kDefaultKeyBits = 2048;
inline constexpr int kMillerRabinRounds = 40;

// Draws two distinct probable primes of about bit_length/2 bits each whose
// product has exactly bit_length bits.
KeyPair keygen(unsigned bit_length, CoinStream& coins);

// Encryption randomness r, uniform over the units of Z_n.
mpz_class draw_coin(const PublicKey& pk, CoinStream& coins);

RawCiphertext encrypt_with_coin(const PublicKey& pk, const mpz_class& m,
                                const mpz_class& r);
RawCiphertext encrypt(const PublicKey& pk, const mpz_class& m, CoinStream& coins);

mpz_class decrypt(const PrivateKey& sk, const RawCiphertext& c);

RawCiphertext add(const PublicKey& pk, const RawCiphertext& a,
                  const RawCiphertext& b);
RawCiphertext sub(const PublicKey& pk, const RawCiphertext& a,
                  const RawCiphertext& b);
// Plaintext-scalar multiplication; k is reduced mod n first.
RawCiphertext cmul(const PublicKey& pk, const mpz_class& k,
                   const RawCiphertext& c);
RawCiphertext negate(const PublicKey& pk, const RawCiphertext& c);
RawCiphertext re_randomize(const PublicKey& pk, const RawCiphertext& c,
                           CoinStream& coins);

// Encryption of zero with r = 1. Valid but deterministic; used as the empty
// sum in linear maps.
RawCiphertext trivial_zero(const PublicKey& pk);

// Wire format: "PKF" + kind byte, version byte, then fields. Integers are a
// 4-byte big-endian length followed by big-endian magnitude bytes.
inline constexpr std::uint8_t kWireVersion = 1;

Bytes serialize(const PublicKey& pk);
Bytes serialize(const PrivateKey& sk);
Bytes serialize(const RawCiphertext& c);

PublicKey deserialize_public_key(std::span<const std::uint8_t> bytes);
PrivateKey deserialize_private_key(std::span<const std::uint8_t> bytes);
RawCiphertext deserialize_ciphertext(std::span<const std::uint8_t> bytes);

namespace wire {

void put_header(Bytes& out, char kind);
void put_integer(Bytes& out, const mpz_class& value);
void put_u64(Bytes& out, std::uint64_t value);
void put_varint(Bytes& out, std::uint64_t value);

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}
  void expect_header(char kind);
  mpz_class integer();
  std::uint64_t u64();
  std::uint64_t varint();
  std::span<const std::uint8_t> rest() const { return bytes_.subspan(pos_); }
  void advance(std::size_t count);
  void expect_end() const;

 private:
  std::uint8_t byte();
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace wire

std::string to_hex(const mpz_class& value);

}  // namespace privkf::phe
