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
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "contamkit/corpus_io.hpp"
#include "contamkit/definitions.hpp"
#include "contamkit/ngram_index.hpp"
#include "json.hpp"

namespace contamkit {

// Commutative monoid of scan counters; partial reports from shards merge
// with operator+= to the same totals as a single pass.
struct ScanCounts {
  std::size_t docs_scanned = 0;
  std::size_t docs_contaminated = 0;
  std::size_t tokens_total = 0;
  // All tokens of contaminated documents.
  std::size_t tokens_contaminated = 0;
  // Definition-specific contaminated tokens (flagged sentences, marked tokens).
  std::size_t tokens_marked = 0;

  void add(const DocumentVerdict& verdict);
  ScanCounts& operator+=(const ScanCounts& other);
  friend bool operator==(const ScanCounts&, const ScanCounts&) = default;

  double doc_ratio() const {
    return docs_scanned == 0 ? 0.0
                             : static_cast<double>(docs_contaminated) / docs_scanned;
  }
  double token_ratio() const {
    return tokens_total == 0
               ? 0.0
               : static_cast<double>(tokens_contaminated) / tokens_total;
  }
};

ScanCounts aggregate(std::span<const DocumentVerdict> verdicts);

struct DatasetReport {
  std::string dataset;
  ScanCounts counts;
};

struct ScanReport {
  DefinitionParams params;
  std::string unit = "documents";  // or "samples" for eval-side scans
  std::vector<DatasetReport> datasets;
};

nlohmann::ordered_json params_json(const DefinitionParams& params);
std::string scan_report_json(const ScanReport& report);

// One verdict line: {"id", "definition", "params", "contaminated",
// "fraction", "contaminated_tokens", "bucket"?}.
std::string verdict_json_line(const DocumentVerdict& verdict,
                              const DefinitionParams& params);
std::string verdict_json_line(const std::string& id, bool contaminated,
                              double fraction, std::size_t contaminated_tokens,
                              const DefinitionParams& params,
                              const std::optional<BucketLabel>& bucket);

enum class DefinitionFamily { kDirect, kPalm, kLlama2 };

DefinitionFamily parse_family(const std::string& name);
const char* to_string(DefinitionFamily family);

struct SweepRow {
  std::string definition;
  std::size_t n = 0;  // n, or L for llama2
  std::optional<Threshold> lambda;
  ScanCounts counts;

  double doc_ratio() const { return counts.doc_ratio(); }
  double token_ratio() const { return counts.token_ratio(); }
};

struct SweepOptions {
  std::uint64_t seed = kDefaultSeed;
  EvalFields fields = EvalFields::kTextAndChoices;
  bool llama2_sentence_level = false;
  std::size_t workers = 1;
};

// One row per (n, lambda) combination, n-major; DirectOverlap ignores
// lambdas and yields one row per n. The corpus is streamed once: every
// document is tokenized a single time and judged under all combinations.
std::vector<SweepRow> sweep(DocumentStream& corpus,
                            std::span<const EvalSample> samples,
                            DefinitionFamily family,
                            std::span<const std::size_t> n_values,
                            std::span<const Threshold> lambda_values,
                            const SweepOptions& options = {});

// Header "definition,n,lambda,doc_ratio,token_ratio"; ratios with 6 decimals,
// lambda empty for direct overlap.
std::string sweep_csv(std::span<const SweepRow> rows);

struct BucketCounts {
  std::size_t clean = 0;
  std::size_t not_clean = 0;
  std::size_t not_dirty = 0;
  std::size_t dirty = 0;

  friend bool operator==(const BucketCounts&, const BucketCounts&) = default;
};

// Llama 2 marking of each sample's input text against a corpus-side index.
std::vector<SampleVerdict> mark_samples(std::span<const EvalSample> samples,
                                        const NGramIndex& corpus_index,
                                        std::size_t min_match_len);

BucketCounts count_buckets(std::span<const SampleVerdict> verdicts,
                           Threshold lambda_clean, Threshold lambda_dirty);

// Writes clean.jsonl, not_clean.jsonl, not_dirty.jsonl, dirty.jsonl (eval
// records plus "bucket" and "contamination_percentage") and
// bucket_counts.json into out_dir. All files appear together or not at all.
BucketCounts export_buckets(std::span<const EvalSample> samples,
                            std::span<const SampleVerdict> verdicts,
                            Threshold lambda_clean, Threshold lambda_dirty,
                            const std::filesystem::path& out_dir);

}  // namespace contamkit
