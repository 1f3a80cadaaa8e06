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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "contamkit/corpus_io.hpp"
#include "contamkit/ngram.hpp"

namespace contamkit {

// Which collection an index was built from; fixes the scan direction.
enum class IndexSource : std::uint8_t { kEvalSide = 0, kCorpusSide = 1 };

const char* to_string(IndexSource source);

// Which eval-sample fields contribute windows to an eval-side index. Every
// field is windowed on its own; no window spans two fields.
enum class EvalFields {
  kTextAndChoices,  // input text and each answer choice
  kAll,             // additionally the prompt and the answer
};

using TokenSequence = std::vector<std::string>;
// fingerprint value -> distinct token windows hashing to it
using VerifyStore =
    std::unordered_map<std::uint64_t, std::vector<TokenSequence>>;

// Immutable set of n-gram fingerprints. Safe for concurrent readers.
class NGramIndex {
 public:
  static constexpr std::uint32_t kFormatVersion = 1;

  std::size_t n() const { return n_; }
  std::uint64_t seed() const { return seed_; }
  IndexSource source() const { return source_; }
  std::size_t entry_count() const { return fingerprints_.size(); }
  bool has_verify_store() const { return verify_; }

  // Exact window query. Throws ParameterError if |window| != n().
  bool contains(std::span<const std::string> window) const;

  // Fingerprint-only query (no exact verification).
  bool contains(NGramFingerprint fp) const;

  // Fingerprint query, confirmed against the verify store when present.
  bool contains(NGramFingerprint fp, std::span<const std::string> window) const;

  // Sorted ascending, distinct.
  std::span<const NGramFingerprint> fingerprints() const {
    return fingerprints_;
  }
  const VerifyStore& verify_store() const { return store_; }

 private:
  friend class NGramIndexBuilder;
  friend NGramIndex read_index(std::istream& in);

  std::size_t n_ = 1;
  std::uint64_t seed_ = kDefaultSeed;
  IndexSource source_ = IndexSource::kEvalSide;
  bool verify_ = false;
  std::vector<NGramFingerprint> fingerprints_;
  VerifyStore store_;
};

// Single-pass builder. add() each token sequence (a document or one eval
// field); windows never cross sequence boundaries.
class NGramIndexBuilder {
 public:
  NGramIndexBuilder(std::size_t n, std::uint64_t seed, IndexSource source,
                    bool verify);

  void add(std::span<const std::string> tokens);
  NGramIndex build() &&;

 private:
  NGramIndex index_;
};

NGramIndex build_index(std::span<const TokenSequence> sequences, std::size_t n,
                       std::uint64_t seed, IndexSource source, bool verify);

// Token sequences of the requested fields of one sample, in field order.
std::vector<TokenSequence> eval_field_tokens(const EvalSample& sample,
                                             EvalFields fields);

NGramIndex build_eval_index(std::span<const EvalSample> samples, std::size_t n,
                            std::uint64_t seed, EvalFields fields, bool verify);
NGramIndex build_corpus_index(DocumentStream& corpus, std::size_t n,
                              std::uint64_t seed, bool verify);

// Binary container, all integers little-endian:
//   magic "CKNGIDX\0" | u32 version | u32 n | u64 seed | u8 source |
//   u8 has_verify | u16 reserved | u64 entry_count | entry_count x u64
// followed, when has_verify, by
//   u64 record_count | per record: u64 fingerprint, u32 sequence_count,
//   per sequence n x (u32 byte_length, bytes).
void write_index(const NGramIndex& index, std::ostream& out);
NGramIndex read_index(std::istream& in);

void save_index(const NGramIndex& index, const std::filesystem::path& path);
NGramIndex load_index(const std::filesystem::path& path);

}  // namespace contamkit
