// Copyright 2026 The contamkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace contamkit {

inline constexpr std::uint64_t kDefaultSeed = 42;

// 64-bit fingerprint of one length-n token window.
struct NGramFingerprint {
  std::uint64_t value = 0;

  friend auto operator<=>(const NGramFingerprint&,
                          const NGramFingerprint&) = default;
};

// Stable across platforms and runs: FNV-1a over the UTF-8 bytes, mixed with
// the seed and finalized with the murmur3 64-bit avalanche.
std::uint64_t token_hash(std::string_view token, std::uint64_t seed);
std::vector<std::uint64_t> token_hashes(std::span<const std::string> tokens,
                                        std::uint64_t seed);

// Polynomial rolling fingerprint mod 2^64:
//   fp(h_0..h_{n-1}) = sum_i h_i * B^(n-1-i),  B odd, derived from the seed.
class RollingHasher {
 public:
  RollingHasher(std::size_t n, std::uint64_t seed);

  std::size_t n() const { return n_; }

  // Fingerprint of a full window of token hashes, computed from scratch.
  // Also resets the rolling state to that window.
  NGramFingerprint init(std::span<const std::uint64_t> window);

  // Slides the window one token: drops `outgoing`, appends `incoming`.
  NGramFingerprint roll(std::uint64_t outgoing, std::uint64_t incoming);

  NGramFingerprint value() const { return {state_}; }

 private:
  std::size_t n_;
  std::uint64_t base_;
  std::uint64_t top_power_;  // B^(n-1)
  std::uint64_t state_ = 0;
};

// From-scratch fingerprint of a token window (any length >= 1).
NGramFingerprint fingerprint(std::span<const std::string> window,
                             std::uint64_t seed);

// One fingerprint per sliding window, in order: max(0, |tokens| - n + 1)
// entries. Throws ParameterError for n == 0.
std::vector<NGramFingerprint> extract_ngrams(std::span<const std::string> tokens,
                                             std::size_t n, std::uint64_t seed);

// Same as extract_ngrams but over precomputed token hashes.
std::vector<NGramFingerprint> window_fingerprints(
    std::span<const std::uint64_t> hashes, std::size_t n, std::uint64_t seed);

}  // namespace contamkit
