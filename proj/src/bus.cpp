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
#include "privkf/bus.hpp"

#include <bit>
#include <cstring>

#include "privkf/errors.hpp"

namespace privkf {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void put_real(phe::Bytes& out, double v) {
  phe::wire::put_u64(out, std::bit_cast<std::uint64_t>(v));
}

void put_matrix(phe::Bytes& out, const Matrix& m) {
  phe::wire::put_varint(out, static_cast<std::uint64_t>(m.rows()));
  phe::wire::put_varint(out, static_cast<std::uint64_t>(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) put_real(out, m(i, j));
  }
}

void put_cipher(phe::Bytes& out, const EncVector& v) {
  phe::wire::put_varint(out, v.size());
  for (const auto& c : v) {
    const phe::Bytes b = serialize(c);
    out.insert(out.end(), b.begin(), b.end());
  }
}

void put_party(phe::Bytes& out, PartyId id) {
  out.push_back(static_cast<std::uint8_t>(id.role));
  phe::wire::put_varint(out, static_cast<std::uint64_t>(id.index));
}

}  // namespace

std::string payload_name(const Payload& payload) {
  return std::visit(overloaded{
                        [](const InitEstimate&) { return std::string("InitEstimate"); },
                        [](const SensorReading&) { return std::string("SensorReading"); },
                        [](const EstimateMsg&) { return std::string("Estimate"); },
                        [](const RefreshMsg&) { return std::string("Refresh"); },
                        [](const GroupPriorMsg&) { return std::string("GroupPrior"); },
                        [](const GlobalEncrypted&) { return std::string("GlobalEncrypted"); },
                        [](const GlobalPlain&) { return std::string("GlobalPlain"); },
                    },
                    payload);
}

phe::Bytes serialize(const Message& m) {
  phe::Bytes out;
  phe::wire::put_header(out, 'M');
  put_party(out, m.from);
  put_party(out, m.to);
  phe::wire::put_varint(out, static_cast<std::uint64_t>(m.step));
  out.push_back(static_cast<std::uint8_t>(m.payload.index()));
  out.push_back(m.envelope ? 1 : 0);
  std::visit(overloaded{
                 [&](const InitEstimate& p) {
                   put_cipher(out, p.x);
                   put_matrix(out, p.P);
                 },
                 [&](const SensorReading& p) {
                   phe::wire::put_varint(out, static_cast<std::uint64_t>(p.sensor));
                   put_cipher(out, p.y);
                   put_matrix(out, p.R);
                 },
                 [&](const EstimateMsg& p) {
                   put_cipher(out, p.x);
                   put_matrix(out, p.P);
                 },
                 [&](const RefreshMsg& p) { put_cipher(out, p.x); },
                 [&](const GroupPriorMsg& p) {
                   phe::wire::put_varint(out, static_cast<std::uint64_t>(p.group));
                   put_cipher(out, p.x);
                   put_matrix(out, p.P);
                 },
                 [&](const GlobalEncrypted& p) {
                   put_cipher(out, p.x);
                   put_matrix(out, p.P);
                 },
                 [&](const GlobalPlain& p) {
                   put_matrix(out, p.x);
                   put_matrix(out, p.P);
                 },
             },
             m.payload);
  return out;
}

void MessageBus::send(Message m) {
  if (m.step != step_) {
    throw BarrierViolation(to_string(m.from) + " sent a step-" + std::to_string(m.step) +
                           " message during step " + std::to_string(step_));
  }
  log_.push_back(DeliveryRecord{m.from, m.to, m.step, payload_name(m.payload),
                                serialize(m).size()});
  mailboxes_[{m.to, m.step}].push_back(std::move(m));
}

std::vector<Message> MessageBus::receive(PartyId receiver, int step) {
  if (step != step_) {
    throw BarrierViolation(to_string(receiver) + " asked for step " + std::to_string(step) +
                           " during step " + std::to_string(step_));
  }
  auto it = mailboxes_.find({receiver, step});
  if (it == mailboxes_.end()) return {};
  std::vector<Message> out = std::move(it->second);
  mailboxes_.erase(it);
  return out;
}

void MessageBus::advance() {
  for (const auto& [key, box] : mailboxes_) {
    if (key.second == step_ && !box.empty()) {
      throw BarrierViolation("step " + std::to_string(step_) + " has undelivered mail for " +
                             to_string(key.first));
    }
  }
  ++step_;
}

std::size_t MessageBus::messages_in_step(int step) const {
  std::size_t count = 0;
  for (const auto& r : log_) count += r.step == step ? 1 : 0;
  return count;
}

std::size_t MessageBus::total_bytes() const {
  std::size_t total = 0;
  for (const auto& r : log_) total += r.bytes;
  return total;
}

void record_envelopes(const std::vector<DeliveryRecord>& log, int step,
                      std::map<PartyId, Transcript*>& transcripts) {
  for (const auto& r : log) {
    if (r.step != step) continue;
    for (auto& [id, t] : transcripts) {
      if (id != r.from && id != r.to) t->add_envelope(step, r.from, r.to);
    }
  }
}

}  // namespace privkf
