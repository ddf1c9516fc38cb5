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

// Per-party execution views: inputs, coin draws, received messages and
// locally computed values, in the order the party observed them.

#include <compare>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "privkf/coins.hpp"
#include "privkf/matlib.hpp"
#include "privkf/phe.hpp"

namespace privkf {

enum class Role { kQuery, kAggregator, kSensor, kGroup };

struct PartyId {
  Role role = Role::kQuery;
  int index = 0;  // sensor or group index; 0 for query and aggregator

  static PartyId query() { return {Role::kQuery, 0}; }
  static PartyId aggregator() { return {Role::kAggregator, 0}; }
  static PartyId sensor(int i) { return {Role::kSensor, i}; }
  static PartyId group(int j) { return {Role::kGroup, j}; }

  friend auto operator<=>(const PartyId&, const PartyId&) = default;
};

std::string to_string(PartyId id);
std::string to_string(Role role);

enum class EntryKind { kInput, kCoin, kReceived, kComputed, kEnvelope };

// What a recorded value means. `subject` on an entry says whose it is
// (sensor index for measurements and sensor models, group index for group
// priors).
enum class Quantity {
  kMeasurement,
  kEstimate,
  kGroupPrior,
  kCovariance,
  kGain,
  kObservationModel,
  kNoiseCovariance,
  kProcessModel,
  kProcessNoise,
  kPublicKey,
  kPrivateKey,
  kCoin,
  kEnvelope,
};

enum class FieldType {
  kPlainVector,
  kPlainMatrix,
  kCipherVector,
  kPublicKey,
  kPrivateKey,
  kCoin,
  kEnvelope,
};

std::string to_string(EntryKind kind);
std::string to_string(Quantity quantity);
std::string to_string(FieldType type);

struct TranscriptEntry {
  EntryKind kind = EntryKind::kInput;
  int step = 0;
  std::string label;
  Quantity quantity = Quantity::kEstimate;
  int subject = -1;
  std::optional<PartyId> peer;  // sender of a received message; both ends of an envelope
  std::optional<PartyId> peer_to;
  // Party that recorded the entry; set when views are concatenated.
  std::optional<PartyId> observer;
  FieldType type = FieldType::kPlainMatrix;

  Matrix plain;          // vectors stored as n x 1
  EncVector cipher;      // kCipherVector
  mpz_class number;      // coin value
  CoinPurpose purpose = CoinPurpose::kEncryption;
  std::vector<mpz_class> key_parts;  // n for a public key; p, q for a private key

  // Everything except the values: kind, step, label, quantity, subject, peers,
  // type, dimensions and ciphertext exponents.
  std::string shape() const;
  // shape() plus the values, hex for integers and round-trip decimal for reals.
  std::string serialize() const;

  bool is_plaintext_value() const {
    return type == FieldType::kPlainVector || type == FieldType::kPlainMatrix;
  }
};

class Transcript {
 public:
  Transcript() = default;
  explicit Transcript(PartyId party) : party_(party) {}

  PartyId party() const { return party_; }
  const std::vector<TranscriptEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  void add_input_vector(int step, std::string label, Quantity q, int subject, const Vector& v);
  void add_input_matrix(int step, std::string label, Quantity q, int subject, const Matrix& m);
  void add_public_key(int step, const phe::PublicKey& pk);
  void add_private_key(int step, const phe::PrivateKey& sk);
  void add_coins(int step, std::string label, CoinPurpose purpose,
                 const std::vector<mpz_class>& coins);
  void add_received_cipher(int step, std::string label, Quantity q, int subject, PartyId from,
                           const EncVector& c);
  void add_received_vector(int step, std::string label, Quantity q, int subject, PartyId from,
                           const Vector& v);
  void add_received_matrix(int step, std::string label, Quantity q, int subject, PartyId from,
                           const Matrix& m);
  void add_computed_vector(int step, std::string label, Quantity q, int subject, const Vector& v);
  void add_computed_matrix(int step, std::string label, Quantity q, int subject, const Matrix& m);
  void add_computed_cipher(int step, std::string label, Quantity q, int subject,
                           const EncVector& c);
  void add_envelope(int step, PartyId from, PartyId to);

  // Append-only; used to concatenate coalition views. Entries are stamped
  // with the party that observed them.
  void append(const Transcript& other);

  std::string serialize() const;
  std::vector<std::string> shape() const;

 private:
  void push(TranscriptEntry e) { entries_.push_back(std::move(e)); }
  PartyId party_;
  std::vector<TranscriptEntry> entries_;
};

}  // namespace privkf
