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
#include "privkf/phe.hpp"

#include <string>

#include "privkf/errors.hpp"

namespace privkf::phe {

namespace {

Bytes magnitude_bytes(const mpz_class& value) {
  if (value == 0) return {};
  const std::size_t count = (mpz_sizeinbase(value.get_mpz_t(), 2) + 7) / 8;
  Bytes out(count);
  std::size_t written = 0;
  mpz_export(out.data(), &written, 1, 1, 1, 0, value.get_mpz_t());
  out.resize(written);
  return out;
}

std::uint64_t fingerprint(const mpz_class& n) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (std::uint8_t b : magnitude_bytes(n)) {
    hash ^= b;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

bool is_probable_prime(const mpz_class& x) {
  return mpz_probab_prime_p(x.get_mpz_t(), kMillerRabinRounds) > 0;
}

mpz_class draw_prime(unsigned bits, CoinStream& coins) {
  constexpr int kMaxAttempts = 1 << 20;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    mpz_class candidate = coins.random_bits(bits);
    mpz_setbit(candidate.get_mpz_t(), bits - 1);
    mpz_setbit(candidate.get_mpz_t(), 0);
    if (is_probable_prime(candidate)) return candidate;
  }
  throw KeygenError("no prime found with " + std::to_string(bits) + " bits");
}

void check_same_key(const PublicKey& pk, const RawCiphertext& c) {
  if (c.key_tag != pk.tag()) {
    throw KeyMismatchError("ciphertext was produced under a different public key");
  }
}

mpz_class powm(const mpz_class& base, const mpz_class& exp, const mpz_class& mod) {
  mpz_class out;
  mpz_powm(out.get_mpz_t(), base.get_mpz_t(), exp.get_mpz_t(), mod.get_mpz_t());
  return out;
}

}  // namespace

PublicKey::PublicKey(mpz_class n) : n_(std::move(n)) {
  if (n_ < 15) throw ValidationError("public modulus must be at least 15");
  n2_ = n_ * n_;
  half_ = n_ / 2;
  bits_ = static_cast<unsigned>(mpz_sizeinbase(n_.get_mpz_t(), 2));
  tag_ = fingerprint(n_);
}

PrivateKey::PrivateKey(mpz_class p, mpz_class q) : p_(std::move(p)), q_(std::move(q)) {
  if (p_ == q_) throw KeygenError("primes must be distinct");
  if (!is_probable_prime(p_) || !is_probable_prime(q_)) {
    throw KeygenError("key factors must be prime");
  }
  const mpz_class n = p_ * q_;
  const mpz_class pm1 = p_ - 1;
  const mpz_class qm1 = q_ - 1;
  mpz_class phi = pm1 * qm1;
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), n.get_mpz_t(), phi.get_mpz_t());
  if (g != 1) throw KeygenError("gcd(pq, (p-1)(q-1)) must be 1");
  mpz_lcm(lambda_.get_mpz_t(), pm1.get_mpz_t(), qm1.get_mpz_t());
  // With g = n + 1, L(g^lambda mod n^2) = lambda mod n.
  if (mpz_invert(mu_.get_mpz_t(), lambda_.get_mpz_t(), n.get_mpz_t()) == 0) {
    throw KeygenError("lambda is not invertible mod n");
  }
  pk_ = PublicKey(n);
}

KeyPair keygen(unsigned bit_length, CoinStream& coins) {
  if (bit_length < 8) {
    throw KeygenError("key length must be at least 8 bits, got " +
                      std::to_string(bit_length));
  }
  const unsigned p_bits = (bit_length + 1) / 2;
  const unsigned q_bits = bit_length / 2;
  constexpr int kMaxPairs = 1000;
  for (int attempt = 0; attempt < kMaxPairs; ++attempt) {
    mpz_class p = draw_prime(p_bits, coins);
    mpz_class q = draw_prime(q_bits, coins);
    if (p == q) continue;
    const mpz_class phi = (p - 1) * (q - 1);
    mpz_class g;
    const mpz_class n = p * q;
    if (mpz_sizeinbase(n.get_mpz_t(), 2) != bit_length) continue;
    mpz_gcd(g.get_mpz_t(), n.get_mpz_t(), phi.get_mpz_t());
    if (g != 1) continue;
    PrivateKey sk(std::move(p), std::move(q));
    return KeyPair{sk.public_key(), sk};
  }
  throw KeygenError("could not find two distinct primes for a " +
                    std::to_string(bit_length) + "-bit key");
}

mpz_class draw_coin(const PublicKey& pk, CoinStream& coins) {
  for (;;) {
    mpz_class r = coins.uniform_below(pk.n());
    if (r == 0) continue;
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), r.get_mpz_t(), pk.n().get_mpz_t());
    if (g == 1) return r;
  }
}

RawCiphertext encrypt_with_coin(const PublicKey& pk, const mpz_class& m,
                                const mpz_class& r) {
  if (m < 0 || m >= pk.n()) {
    throw PlaintextRangeError("plaintext outside [0, n)");
  }
  // (1 + n)^m = 1 + m n (mod n^2)
  mpz_class c = (1 + m * pk.n()) % pk.n_squared();
  c = (c * powm(r, pk.n(), pk.n_squared())) % pk.n_squared();
  return RawCiphertext{std::move(c), pk.tag()};
}

RawCiphertext encrypt(const PublicKey& pk, const mpz_class& m, CoinStream& coins) {
  if (m < 0 || m >= pk.n()) {
    throw PlaintextRangeError("plaintext outside [0, n)");
  }
  return encrypt_with_coin(pk, m, draw_coin(pk, coins));
}

mpz_class decrypt(const PrivateKey& sk, const RawCiphertext& c) {
  const PublicKey& pk = sk.public_key();
  check_same_key(pk, c);
  if (c.value <= 0 || c.value >= pk.n_squared()) {
    throw CiphertextError("ciphertext outside [1, n^2)");
  }
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), c.value.get_mpz_t(), pk.n().get_mpz_t());
  if (g != 1) throw CiphertextError("ciphertext not a unit mod n^2");
  const mpz_class u = powm(c.value, sk.lambda(), pk.n_squared());
  const mpz_class l = (u - 1) / pk.n();
  return (l * sk.mu()) % pk.n();
}

RawCiphertext add(const PublicKey& pk, const RawCiphertext& a,
                  const RawCiphertext& b) {
  check_same_key(pk, a);
  check_same_key(pk, b);
  return RawCiphertext{(a.value * b.value) % pk.n_squared(), pk.tag()};
}

RawCiphertext negate(const PublicKey& pk, const RawCiphertext& c) {
  check_same_key(pk, c);
  mpz_class inv;
  if (mpz_invert(inv.get_mpz_t(), c.value.get_mpz_t(),
                 pk.n_squared().get_mpz_t()) == 0) {
    throw CiphertextError("ciphertext not invertible mod n^2");
  }
  return RawCiphertext{std::move(inv), pk.tag()};
}

RawCiphertext sub(const PublicKey& pk, const RawCiphertext& a,
                  const RawCiphertext& b) {
  check_same_key(pk, a);
  return add(pk, a, negate(pk, b));
}

RawCiphertext cmul(const PublicKey& pk, const mpz_class& k,
                   const RawCiphertext& c) {
  check_same_key(pk, c);
  mpz_class reduced = k % pk.n();
  if (reduced < 0) reduced += pk.n();
  if (reduced == 0) return trivial_zero(pk);
  // Scalars in the upper half are negative numbers under the signed reading;
  // c^k = (c^-1)^(n-k) and n-k is short.
  if (reduced > pk.half_n()) {
    const RawCiphertext inv = negate(pk, c);
    return RawCiphertext{powm(inv.value, pk.n() - reduced, pk.n_squared()), pk.tag()};
  }
  return RawCiphertext{powm(c.value, reduced, pk.n_squared()), pk.tag()};
}

RawCiphertext re_randomize(const PublicKey& pk, const RawCiphertext& c,
                           CoinStream& coins) {
  check_same_key(pk, c);
  const mpz_class r = draw_coin(pk, coins);
  return RawCiphertext{(c.value * powm(r, pk.n(), pk.n_squared())) % pk.n_squared(),
                       pk.tag()};
}

RawCiphertext trivial_zero(const PublicKey& pk) { return RawCiphertext{1, pk.tag()}; }

namespace wire {

void put_header(Bytes& out, char kind) {
  out.push_back('P');
  out.push_back('K');
  out.push_back('F');
  out.push_back(static_cast<std::uint8_t>(kind));
  out.push_back(kWireVersion);
}

void put_integer(Bytes& out, const mpz_class& value) {
  if (value < 0) throw ValidationError("wire integers are non-negative");
  const Bytes mag = magnitude_bytes(value);
  const auto len = static_cast<std::uint32_t>(mag.size());
  for (int shift = 24; shift >= 0; shift -= 8) {
    out.push_back(static_cast<std::uint8_t>(len >> shift));
  }
  out.insert(out.end(), mag.begin(), mag.end());
}

void put_u64(Bytes& out, std::uint64_t value) {
  for (int shift = 56; shift >= 0; shift -= 8) {
    out.push_back(static_cast<std::uint8_t>(value >> shift));
  }
}

void put_varint(Bytes& out, std::uint64_t value) {
  while (value >= 0x80) {
    out.push_back(static_cast<std::uint8_t>(value | 0x80));
    value >>= 7;
  }
  out.push_back(static_cast<std::uint8_t>(value));
}

std::uint8_t Reader::byte() {
  if (pos_ >= bytes_.size()) throw ValidationError("truncated wire data");
  return bytes_[pos_++];
}

void Reader::advance(std::size_t count) {
  if (pos_ + count > bytes_.size()) throw ValidationError("truncated wire data");
  pos_ += count;
}

void Reader::expect_header(char kind) {
  if (byte() != 'P' || byte() != 'K' || byte() != 'F') {
    throw ValidationError("bad magic tag");
  }
  if (byte() != static_cast<std::uint8_t>(kind)) {
    throw ValidationError(std::string("expected record kind '") + kind + "'");
  }
  if (byte() != kWireVersion) throw ValidationError("unsupported wire version");
}

mpz_class Reader::integer() {
  std::uint32_t len = 0;
  for (int i = 0; i < 4; ++i) len = (len << 8) | byte();
  if (pos_ + len > bytes_.size()) throw ValidationError("truncated integer");
  mpz_class out = 0;
  if (len > 0) mpz_import(out.get_mpz_t(), len, 1, 1, 1, 0, bytes_.data() + pos_);
  pos_ += len;
  return out;
}

std::uint64_t Reader::u64() {
  std::uint64_t value = 0;
  for (int i = 0; i < 8; ++i) value = (value << 8) | byte();
  return value;
}

std::uint64_t Reader::varint() {
  std::uint64_t value = 0;
  for (int shift = 0; shift < 64; shift += 7) {
    const std::uint8_t b = byte();
    value |= static_cast<std::uint64_t>(b & 0x7f) << shift;
    if ((b & 0x80) == 0) return value;
  }
  throw ValidationError("varint too long");
}

void Reader::expect_end() const {
  if (pos_ != bytes_.size()) throw ValidationError("trailing bytes in wire data");
}

}  // namespace wire

Bytes serialize(const PublicKey& pk) {
  Bytes out;
  wire::put_header(out, 'K');
  wire::put_integer(out, pk.n());
  return out;
}

Bytes serialize(const PrivateKey& sk) {
  Bytes out;
  wire::put_header(out, 'S');
  wire::put_integer(out, sk.p());
  wire::put_integer(out, sk.q());
  return out;
}

Bytes serialize(const RawCiphertext& c) {
  Bytes out;
  wire::put_header(out, 'C');
  wire::put_u64(out, c.key_tag);
  wire::put_integer(out, c.value);
  return out;
}

PublicKey deserialize_public_key(std::span<const std::uint8_t> bytes) {
  wire::Reader in(bytes);
  in.expect_header('K');
  PublicKey pk(in.integer());
  in.expect_end();
  return pk;
}

PrivateKey deserialize_private_key(std::span<const std::uint8_t> bytes) {
  wire::Reader in(bytes);
  in.expect_header('S');
  mpz_class p = in.integer();
  mpz_class q = in.integer();
  in.expect_end();
  return PrivateKey(std::move(p), std::move(q));
}

RawCiphertext deserialize_ciphertext(std::span<const std::uint8_t> bytes) {
  wire::Reader in(bytes);
  in.expect_header('C');
  RawCiphertext c;
  c.key_tag = in.u64();
  c.value = in.integer();
  in.expect_end();
  return c;
}

std::string to_hex(const mpz_class& value) { return value.get_str(16); }

}  // namespace privkf::phe
