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

// Protocol messages and the synchronous in-process network that carries
// them.

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "privkf/matlib.hpp"
#include "privkf/transcript.hpp"

namespace privkf {

// Protocol 1
struct InitEstimate {
  EncVector x;
  Matrix P;
};
struct SensorReading {
  int sensor = 0;
  EncVector y;
  Matrix R;
};
struct EstimateMsg {
  EncVector x;
  Matrix P;
};
struct RefreshMsg {
  EncVector x;
};

// Protocol 2
struct GroupPriorMsg {
  int group = 0;
  EncVector x;
  Matrix P;
};
struct GlobalEncrypted {
  EncVector x;
  Matrix P;
};
struct GlobalPlain {
  Vector x;
  Matrix P;
};

using Payload = std::variant<InitEstimate, SensorReading, EstimateMsg, RefreshMsg,
                             GroupPriorMsg, GlobalEncrypted, GlobalPlain>;

std::string payload_name(const Payload& payload);

struct Message {
  PartyId from;
  PartyId to;
  int step = 0;
  Payload payload;
  // Transport-layer encryption between the two endpoints. Other parties see
  // only that a message passed.
  bool envelope = true;
};

// Wire form: role/step header followed by the phe/encoding records of the
// payload. Reals are IEEE-754 big-endian.
phe::Bytes serialize(const Message& m);

struct DeliveryRecord {
  PartyId from;
  PartyId to;
  int step = 0;
  std::string kind;
  std::size_t bytes = 0;
};

// Mailboxes keyed by (receiver, step). Rounds are barrier-synchronized:
// only the current step may be sent or received, and advance() refuses to
// move on while a current-step message is still undelivered.
class MessageBus {
 public:
  int current_step() const { return step_; }

  void send(Message m);
  std::vector<Message> receive(PartyId receiver, int step);
  void advance();

  const std::vector<DeliveryRecord>& log() const { return log_; }
  std::size_t messages_in_step(int step) const;
  std::size_t total_bytes() const;

 private:
  int step_ = 0;
  std::map<std::pair<PartyId, int>, std::vector<Message>> mailboxes_;
  std::vector<DeliveryRecord> log_;
};

// Appends an envelope entry to every transcript whose party is neither end
// of a message sent in `step`.
void record_envelopes(const std::vector<DeliveryRecord>& log, int step,
                      std::map<PartyId, Transcript*>& transcripts);

}  // namespace privkf
