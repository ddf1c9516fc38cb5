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
#include "privkf/transcript.hpp"

#include <cstdio>
#include <sstream>

namespace privkf {

std::string to_string(Role role) {
  switch (role) {
    case Role::kQuery:
      return "query";
    case Role::kAggregator:
      return "aggregator";
    case Role::kSensor:
      return "sensor";
    case Role::kGroup:
      return "group";
  }
  return "?";
}

std::string to_string(PartyId id) {
  if (id.role == Role::kSensor || id.role == Role::kGroup) {
    return to_string(id.role) + "[" + std::to_string(id.index) + "]";
  }
  return to_string(id.role);
}

std::string to_string(EntryKind kind) {
  switch (kind) {
    case EntryKind::kInput:
      return "input";
    case EntryKind::kCoin:
      return "coin";
    case EntryKind::kReceived:
      return "received";
    case EntryKind::kComputed:
      return "computed";
    case EntryKind::kEnvelope:
      return "envelope";
  }
  return "?";
}

std::string to_string(Quantity q) {
  switch (q) {
    case Quantity::kMeasurement:
      return "measurement";
    case Quantity::kEstimate:
      return "estimate";
    case Quantity::kGroupPrior:
      return "group_prior";
    case Quantity::kCovariance:
      return "covariance";
    case Quantity::kGain:
      return "gain";
    case Quantity::kObservationModel:
      return "observation_model";
    case Quantity::kNoiseCovariance:
      return "noise_covariance";
    case Quantity::kProcessModel:
      return "process_model";
    case Quantity::kProcessNoise:
      return "process_noise";
    case Quantity::kPublicKey:
      return "public_key";
    case Quantity::kPrivateKey:
      return "private_key";
    case Quantity::kCoin:
      return "coin";
    case Quantity::kEnvelope:
      return "envelope";
  }
  return "?";
}

std::string to_string(FieldType type) {
  switch (type) {
    case FieldType::kPlainVector:
      return "plain_vector";
    case FieldType::kPlainMatrix:
      return "plain_matrix";
    case FieldType::kCipherVector:
      return "cipher_vector";
    case FieldType::kPublicKey:
      return "public_key";
    case FieldType::kPrivateKey:
      return "private_key";
    case FieldType::kCoin:
      return "coin";
    case FieldType::kEnvelope:
      return "envelope";
  }
  return "?";
}

namespace {

std::string real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string TranscriptEntry::shape() const {
  std::ostringstream out;
  if (observer) out << '@' << to_string(*observer) << ' ';
  out << to_string(kind) << ' ' << step << ' ' << label << ' ' << to_string(quantity) << ' '
      << subject << ' ' << (peer ? to_string(*peer) : "-") << ' '
      << (peer_to ? to_string(*peer_to) : "-") << ' ' << to_string(type);
  switch (type) {
    case FieldType::kPlainVector:
    case FieldType::kPlainMatrix:
      out << ' ' << plain.rows() << 'x' << plain.cols();
      break;
    case FieldType::kCipherVector:
      out << ' ' << cipher.size() << " e";
      for (const auto& c : cipher) out << ' ' << c.exponent;
      break;
    case FieldType::kCoin:
      out << ' ' << privkf::to_string(purpose);
      break;
    default:
      break;
  }
  return out.str();
}

std::string TranscriptEntry::serialize() const {
  std::ostringstream out;
  out << shape() << " |";
  switch (type) {
    case FieldType::kPlainVector:
    case FieldType::kPlainMatrix:
      for (Eigen::Index i = 0; i < plain.rows(); ++i) {
        for (Eigen::Index j = 0; j < plain.cols(); ++j) out << ' ' << real(plain(i, j));
      }
      break;
    case FieldType::kCipherVector:
      for (const auto& c : cipher) out << ' ' << phe::to_hex(c.raw.value);
      break;
    case FieldType::kPublicKey:
    case FieldType::kPrivateKey:
      for (const auto& part : key_parts) out << ' ' << phe::to_hex(part);
      break;
    case FieldType::kCoin:
      out << ' ' << phe::to_hex(number);
      break;
    case FieldType::kEnvelope:
      out << " opaque";
      break;
  }
  return out.str();
}

void Transcript::add_input_vector(int step, std::string label, Quantity q, int subject,
                                  const Vector& v) {
  TranscriptEntry e;
  e.kind = EntryKind::kInput;
  e.step = step;
  e.label = std::move(label);
  e.quantity = q;
  e.subject = subject;
  e.type = FieldType::kPlainVector;
  e.plain = v;
  push(std::move(e));
}

void Transcript::add_input_matrix(int step, std::string label, Quantity q, int subject,
                                  const Matrix& m) {
  TranscriptEntry e;
  e.kind = EntryKind::kInput;
  e.step = step;
  e.label = std::move(label);
  e.quantity = q;
  e.subject = subject;
  e.type = FieldType::kPlainMatrix;
  e.plain = m;
  push(std::move(e));
}

void Transcript::add_public_key(int step, const phe::PublicKey& pk) {
  TranscriptEntry e;
  e.kind = EntryKind::kInput;
  e.step = step;
  e.label = "pk";
  e.quantity = Quantity::kPublicKey;
  e.type = FieldType::kPublicKey;
  e.key_parts = {pk.n()};
  push(std::move(e));
}

void Transcript::add_private_key(int step, const phe::PrivateKey& sk) {
  TranscriptEntry e;
  e.kind = EntryKind::kInput;
  e.step = step;
  e.label = "sk";
  e.quantity = Quantity::kPrivateKey;
  e.type = FieldType::kPrivateKey;
  e.key_parts = {sk.p(), sk.q()};
  push(std::move(e));
}

void Transcript::add_coins(int step, std::string label, CoinPurpose purpose,
                           const std::vector<mpz_class>& coins) {
  for (const auto& c : coins) {
    TranscriptEntry e;
    e.kind = EntryKind::kCoin;
    e.step = step;
    e.label = label;
    e.quantity = Quantity::kCoin;
    e.type = FieldType::kCoin;
    e.purpose = purpose;
    e.number = c;
    push(std::move(e));
  }
}

void Transcript::add_received_cipher(int step, std::string label, Quantity q, int subject,
                                     PartyId from, const EncVector& c) {
  TranscriptEntry e;
  e.kind = EntryKind::kReceived;
  e.step = step;
  e.label = std::move(label);
  e.quantity = q;
  e.subject = subject;
  e.peer = from;
  e.type = FieldType::kCipherVector;
  e.cipher = c;
  push(std::move(e));
}

void Transcript::add_received_vector(int step, std::string label, Quantity q, int subject,
                                     PartyId from, const Vector& v) {
  TranscriptEntry e;
  e.kind = EntryKind::kReceived;
  e.step = step;
  e.label = std::move(label);
  e.quantity = q;
  e.subject = subject;
  e.peer = from;
  e.type = FieldType::kPlainVector;
  e.plain = v;
  push(std::move(e));
}

void Transcript::add_received_matrix(int step, std::string label, Quantity q, int subject,
                                     PartyId from, const Matrix& m) {
  TranscriptEntry e;
  e.kind = EntryKind::kReceived;
  e.step = step;
  e.label = std::move(label);
  e.quantity = q;
  e.subject = subject;
  e.peer = from;
  e.type = FieldType::kPlainMatrix;
  e.plain = m;
  push(std::move(e));
}

void Transcript::add_computed_vector(int step, std::string label, Quantity q, int subject,
                                     const Vector& v) {
  TranscriptEntry e;
  e.kind = EntryKind::kComputed;
  e.step = step;
  e.label = std::move(label);
  e.quantity = q;
  e.subject = subject;
  e.type = FieldType::kPlainVector;
  e.plain = v;
  push(std::move(e));
}

void Transcript::add_computed_matrix(int step, std::string label, Quantity q, int subject,
                                     const Matrix& m) {
  TranscriptEntry e;
  e.kind = EntryKind::kComputed;
  e.step = step;
  e.label = std::move(label);
  e.quantity = q;
  e.subject = subject;
  e.type = FieldType::kPlainMatrix;
  e.plain = m;
  push(std::move(e));
}

void Transcript::add_computed_cipher(int step, std::string label, Quantity q, int subject,
                                     const EncVector& c) {
  TranscriptEntry e;
  e.kind = EntryKind::kComputed;
  e.step = step;
  e.label = std::move(label);
  e.quantity = q;
  e.subject = subject;
  e.type = FieldType::kCipherVector;
  e.cipher = c;
  push(std::move(e));
}

void Transcript::add_envelope(int step, PartyId from, PartyId to) {
  TranscriptEntry e;
  e.kind = EntryKind::kEnvelope;
  e.step = step;
  e.label = "gamma";
  e.quantity = Quantity::kEnvelope;
  e.peer = from;
  e.peer_to = to;
  e.type = FieldType::kEnvelope;
  push(std::move(e));
}

void Transcript::append(const Transcript& other) {
  for (TranscriptEntry e : other.entries_) {
    if (!e.observer) e.observer = other.party_;
    entries_.push_back(std::move(e));
  }
}

std::string Transcript::serialize() const {
  std::string out = "# view of " + to_string(party_) + "\n";
  for (const auto& e : entries_) {
    out += e.serialize();
    out += '\n';
  }
  return out;
}

std::vector<std::string> Transcript::shape() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.shape());
  return out;
}

}  // namespace privkf
