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

#include <cstdint>
#include <random>
#include <string_view>

#include <gmpxx.h>

namespace privkf {

enum class CoinPurpose : std::uint32_t {
  kKeygen = 1,
  kEncryption = 2,
  kNoise = 3,
  kSimulator = 4,
};

std::string_view to_string(CoinPurpose purpose);

// Deterministic random source. Identical (seed, purpose, stream) triples
// produce identical sequences on every platform; `stream` separates the
// parties of one run so each owns an independent sequence.
class CoinStream {
 public:
  CoinStream(std::uint64_t seed, CoinPurpose purpose, std::uint64_t stream = 0);

  CoinStream(const CoinStream&) = delete;
  CoinStream& operator=(const CoinStream&) = delete;
  CoinStream(CoinStream&&) = default;
  CoinStream& operator=(CoinStream&&) = default;

  CoinPurpose purpose() const { return purpose_; }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform integer with exactly `bits` random bits (top bit may be zero).
  mpz_class random_bits(unsigned bits);

  // Uniform integer in [0, bound). bound must be positive.
  mpz_class uniform_below(const mpz_class& bound);

  // Uniform real in [0, 1).
  double uniform01();

  double standard_normal();

  std::mt19937_64& engine() { return engine_; }

 private:
  CoinPurpose purpose_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace privkf
