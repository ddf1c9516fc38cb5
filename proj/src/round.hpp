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

// Helpers shared by the protocol drivers.

#include <chrono>
#include <string>
#include <variant>

#include "privkf/bus.hpp"
#include "privkf/errors.hpp"
#include "privkf/run.hpp"

namespace privkf::detail {

// Adds the wall time of fn() to the party's entry for `step` (1-based).
template <class Fn>
void timed(RunResult& run, PartyId party, int step, Fn&& fn) {
  const auto start = std::chrono::steady_clock::now();
  fn();
  const double ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - start)
                        .count();
  auto& v = run.step_ms[party];
  if (v.size() < static_cast<std::size_t>(step)) v.resize(static_cast<std::size_t>(step), 0.0);
  v[static_cast<std::size_t>(step) - 1] += ms;
}

template <class T>
const T& expect(const Message& m) {
  const T* p = std::get_if<T>(&m.payload);
  if (p == nullptr) {
    throw IncompleteRoundError("unexpected " + payload_name(m.payload) + " from " +
                               to_string(m.from));
  }
  return *p;
}

}  // namespace privkf::detail
