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

// Fixed-point codec between signed reals and Paillier plaintexts. A value is
// signed(mantissa) / 2^exponent, where mantissas in the upper half of Z_n
// read as negative. Ciphertexts carry their exponent so additions can align
// scales homomorphically.

#include <cstdint>
#include <span>
#include <vector>

#include <gmpxx.h>

#include "privkf/coins.hpp"
#include "privkf/phe.hpp"

namespace privkf {

inline constexpr unsigned kDefaultFracBits = 40;
inline constexpr unsigned kExponentGuardBits = 64;

struct Encoded {
  mpz_class mantissa;
  unsigned exponent = 0;
};

struct Ciphertext {
  phe::RawCiphertext raw;
  unsigned exponent = 0;
};

// Largest exponent a ciphertext may carry under `pk`.
unsigned exponent_budget(const phe::PublicKey& pk);

mpz_class signed_value(const mpz_class& mantissa, const phe::PublicKey& pk);

Encoded encode(double x, unsigned frac_bits, const phe::PublicKey& pk);
double decode(const Encoded& e, const phe::PublicKey& pk);

Ciphertext encrypt_value(const phe::PublicKey& pk, double x, unsigned frac_bits,
                         CoinStream& coins);
Ciphertext encrypt_encoded(const phe::PublicKey& pk, const Encoded& e,
                           const mpz_class& coin);
double decrypt_value(const phe::PrivateKey& sk, const Ciphertext& c);

// Raises the ciphertext to `exponent` by multiplying with 2^delta.
Ciphertext align(const phe::PublicKey& pk, const Ciphertext& c, unsigned exponent);

Ciphertext enc_add(const phe::PublicKey& pk, const Ciphertext& a, const Ciphertext& b);
Ciphertext enc_sub(const phe::PublicKey& pk, const Ciphertext& a, const Ciphertext& b);
Ciphertext enc_cmul(const phe::PublicKey& pk, const Encoded& k, const Ciphertext& c);

// Raw ciphertext bytes followed by the exponent as a LEB128 varint.
phe::Bytes serialize(const Ciphertext& c);
Ciphertext deserialize_encrypted(std::span<const std::uint8_t> bytes);

}  // namespace privkf
