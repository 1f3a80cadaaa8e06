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

#include "contamkit/ngram.hpp"

#include "contamkit/error.hpp"

namespace contamkit {
namespace {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

std::uint64_t fmix64(std::uint64_t k) {
  k ^= k >> 33;
  k *= 0xff51afd7ed558ccdULL;
  k ^= k >> 33;
  k *= 0xc4ceb9fe1a85ec53ULL;
  k ^= k >> 33;
  return k;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t base_for_seed(std::uint64_t seed) { return splitmix64(seed) | 1; }

std::uint64_t power(std::uint64_t base, std::size_t exp) {
  std::uint64_t result = 1;
  while (exp > 0) {
    if (exp & 1) result *= base;
    base *= base;
    exp >>= 1;
  }
  return result;
}

}  // namespace

std::uint64_t token_hash(std::string_view token, std::uint64_t seed) {
  std::uint64_t h = kFnvOffset;
  for (unsigned char c : token) {
    h ^= c;
    h *= kFnvPrime;
  }
  return fmix64(h ^ splitmix64(seed ^ token.size()));
}

std::vector<std::uint64_t> token_hashes(std::span<const std::string> tokens,
                                        std::uint64_t seed) {
  std::vector<std::uint64_t> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(token_hash(t, seed));
  return out;
}

RollingHasher::RollingHasher(std::size_t n, std::uint64_t seed)
    : n_(n), base_(base_for_seed(seed)) {
  if (n == 0) throw ParameterError("n-gram length must be >= 1");
  top_power_ = power(base_, n - 1);
}

NGramFingerprint RollingHasher::init(std::span<const std::uint64_t> window) {
  if (window.size() != n_) {
    throw ParameterError("rolling window must hold exactly n token hashes");
  }
  std::uint64_t h = 0;
  for (std::uint64_t t : window) h = h * base_ + t;
  state_ = h;
  return {state_};
}

NGramFingerprint RollingHasher::roll(std::uint64_t outgoing,
                                     std::uint64_t incoming) {
  state_ = (state_ - outgoing * top_power_) * base_ + incoming;
  return {state_};
}

NGramFingerprint fingerprint(std::span<const std::string> window,
                             std::uint64_t seed) {
  RollingHasher hasher(window.size(), seed);
  auto hashes = token_hashes(window, seed);
  return hasher.init(hashes);
}

std::vector<NGramFingerprint> window_fingerprints(
    std::span<const std::uint64_t> hashes, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw ParameterError("n-gram length must be >= 1");
  std::vector<NGramFingerprint> out;
  if (hashes.size() < n) return out;
  out.reserve(hashes.size() - n + 1);
  RollingHasher hasher(n, seed);
  out.push_back(hasher.init(hashes.first(n)));
  for (std::size_t i = n; i < hashes.size(); ++i) {
    out.push_back(hasher.roll(hashes[i - n], hashes[i]));
  }
  return out;
}

std::vector<NGramFingerprint> extract_ngrams(std::span<const std::string> tokens,
                                             std::size_t n, std::uint64_t seed) {
  if (n == 0) throw ParameterError("n-gram length must be >= 1");
  auto hashes = token_hashes(tokens, seed);
  return window_fingerprints(hashes, n, seed);
}

}  // namespace contamkit
