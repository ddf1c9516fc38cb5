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
#include "privkf/encoding.hpp"

#include <cmath>
#include <string>

#include "privkf/errors.hpp"

namespace privkf {

unsigned exponent_budget(const phe::PublicKey& pk) {
  return pk.bits() > kExponentGuardBits ? pk.bits() - kExponentGuardBits : 0;
}

mpz_class signed_value(const mpz_class& mantissa, const phe::PublicKey& pk) {
  if (mantissa > pk.half_n()) return mantissa - pk.n();
  return mantissa;
}

Encoded encode(double x, unsigned frac_bits, const phe::PublicKey& pk) {
  if (!std::isfinite(x)) throw EncodeOverflowError("cannot encode a non-finite value");
  const double scaled = std::nearbyint(std::ldexp(x, static_cast<int>(frac_bits)));
  if (!std::isfinite(scaled)) {
    throw EncodeOverflowError("value overflows at " + std::to_string(frac_bits) +
                              " fractional bits");
  }
  mpz_class v(scaled);
  mpz_class magnitude = abs(v);
  // |v| < n/2 keeps the signed reading unambiguous.
  if (2 * magnitude >= pk.n()) {
    throw EncodeOverflowError("value " + std::to_string(x) +
                              " exceeds the plaintext range");
  }
  if (v < 0) v += pk.n();
  return Encoded{std::move(v), frac_bits};
}

double decode(const Encoded& e, const phe::PublicKey& pk) {
  const mpz_class v = signed_value(e.mantissa, pk);
  if (v == 0) return 0.0;
  long shift = 0;
  const double head = mpz_get_d_2exp(&shift, v.get_mpz_t());
  return std::ldexp(head, static_cast<int>(shift - static_cast<long>(e.exponent)));
}

Ciphertext encrypt_value(const phe::PublicKey& pk, double x, unsigned frac_bits,
                         CoinStream& coins) {
  const Encoded e = encode(x, frac_bits, pk);
  return Ciphertext{phe::encrypt(pk, e.mantissa, coins), e.exponent};
}

Ciphertext encrypt_encoded(const phe::PublicKey& pk, const Encoded& e,
                           const mpz_class& coin) {
  return Ciphertext{phe::encrypt_with_coin(pk, e.mantissa, coin), e.exponent};
}

double decrypt_value(const phe::PrivateKey& sk, const Ciphertext& c) {
  return decode(Encoded{phe::decrypt(sk, c.raw), c.exponent}, sk.public_key());
}

Ciphertext align(const phe::PublicKey& pk, const Ciphertext& c, unsigned exponent) {
  if (exponent < c.exponent) {
    throw EncodeOverflowError("cannot lower a ciphertext exponent");
  }
  if (exponent > exponent_budget(pk)) {
    throw EncodeOverflowError("aligned exponent " + std::to_string(exponent) +
                              " exceeds budget " +
                              std::to_string(exponent_budget(pk)));
  }
  if (exponent == c.exponent) return c;
  mpz_class factor;
  mpz_ui_pow_ui(factor.get_mpz_t(), 2, exponent - c.exponent);
  return Ciphertext{phe::cmul(pk, factor, c.raw), exponent};
}

Ciphertext enc_add(const phe::PublicKey& pk, const Ciphertext& a, const Ciphertext& b) {
  const unsigned e = std::max(a.exponent, b.exponent);
  return Ciphertext{phe::add(pk, align(pk, a, e).raw, align(pk, b, e).raw), e};
}

Ciphertext enc_sub(const phe::PublicKey& pk, const Ciphertext& a, const Ciphertext& b) {
  const unsigned e = std::max(a.exponent, b.exponent);
  return Ciphertext{phe::sub(pk, align(pk, a, e).raw, align(pk, b, e).raw), e};
}

Ciphertext enc_cmul(const phe::PublicKey& pk, const Encoded& k, const Ciphertext& c) {
  const unsigned e = k.exponent + c.exponent;
  if (e > exponent_budget(pk)) {
    throw ExponentBudgetExceeded("product exponent " + std::to_string(e) +
                                 " exceeds budget " +
                                 std::to_string(exponent_budget(pk)));
  }
  return Ciphertext{phe::cmul(pk, k.mantissa, c.raw), e};
}

phe::Bytes serialize(const Ciphertext& c) {
  phe::Bytes out;
  phe::wire::put_header(out, 'E');
  phe::wire::put_u64(out, c.raw.key_tag);
  phe::wire::put_integer(out, c.raw.value);
  phe::wire::put_varint(out, c.exponent);
  return out;
}

Ciphertext deserialize_encrypted(std::span<const std::uint8_t> bytes) {
  phe::wire::Reader in(bytes);
  in.expect_header('E');
  Ciphertext c;
  c.raw.key_tag = in.u64();
  c.raw.value = in.integer();
  c.exponent = static_cast<unsigned>(in.varint());
  in.expect_end();
  return c;
}

}  // namespace privkf
