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
#include "privkf/coins.hpp"

#include <vector>

namespace privkf {

std::string_view to_string(CoinPurpose purpose) {
  switch (purpose) {
    case CoinPurpose::kKeygen:
      return "keygen";
    case CoinPurpose::kEncryption:
      return "encryption";
    case CoinPurpose::kNoise:
      return "noise";
    case CoinPurpose::kSimulator:
      return "simulator";
  }
  return "unknown";
}

namespace {

std::mt19937_64 make_engine(std::uint64_t seed, CoinPurpose purpose,
                            std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(purpose),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

CoinStream::CoinStream(std::uint64_t seed, CoinPurpose purpose,
                       std::uint64_t stream)
    : purpose_(purpose), engine_(make_engine(seed, purpose, stream)) {}

mpz_class CoinStream::random_bits(unsigned bits) {
  mpz_class out = 0;
  unsigned remaining = bits;
  while (remaining > 0) {
    const unsigned take = remaining >= 64 ? 64 : remaining;
    std::uint64_t word = engine_();
    if (take < 64) word &= (std::uint64_t{1} << take) - 1;
    out <<= take;
    mpz_class chunk;
    mpz_import(chunk.get_mpz_t(), 1, 1, sizeof(word), 0, 0, &word);
    out += chunk;
    remaining -= take;
  }
  return out;
}

mpz_class CoinStream::uniform_below(const mpz_class& bound) {
  const unsigned bits = static_cast<unsigned>(mpz_sizeinbase(bound.get_mpz_t(), 2));
  // Rejection sampling keeps the draw exactly uniform.
  for (;;) {
    mpz_class candidate = random_bits(bits);
    if (candidate < bound) return candidate;
  }
}

double CoinStream::uniform01() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double CoinStream::standard_normal() { return normal_(engine_); }

}  // namespace privkf
