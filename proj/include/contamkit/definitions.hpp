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
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "contamkit/ngram_index.hpp"
#include "contamkit/tokenizer.hpp"

namespace contamkit {

// A fraction threshold lambda in [0, 1], held exactly in parts per million
// so that every comparison against a count ratio is integer arithmetic.
class Threshold {
 public:
  static constexpr std::uint64_t kScale = 1'000'000;

  constexpr Threshold() = default;
  // Rounds to the nearest ppm. Throws ParameterError outside [0, 1].
  static Threshold from_double(double lambda);
  static constexpr Threshold from_ppm(std::uint64_t ppm) {
    Threshold t;
    t.ppm_ = ppm > kScale ? kScale : ppm;
    return t;
  }

  std::uint64_t ppm() const { return ppm_; }
  double value() const { return static_cast<double>(ppm_) / kScale; }

  // num/den >= lambda. den must be > 0.
  bool reached_by(std::uint64_t num, std::uint64_t den) const {
    return static_cast<unsigned __int128>(num) * kScale >=
           static_cast<unsigned __int128>(ppm_) * den;
  }
  // num/den > lambda. den must be > 0.
  bool exceeded_by(std::uint64_t num, std::uint64_t den) const {
    return static_cast<unsigned __int128>(num) * kScale >
           static_cast<unsigned __int128>(ppm_) * den;
  }

  friend auto operator<=>(const Threshold&, const Threshold&) = default;

 private:
  std::uint64_t ppm_ = 0;
};

struct DirectOverlapParams {
  std::size_t n = 8;
};

struct PalmParams {
  std::size_t n = 8;
  Threshold lambda = Threshold::from_ppm(700'000);
};

struct Llama2Params {
  std::size_t min_match_len = 11;  // runs "longer than 10 tokens"
  Threshold lambda = Threshold::from_ppm(700'000);
  // Judge each sentence on its own instead of the whole document.
  bool sentence_level = false;
};

using DefinitionParams = std::variant<DirectOverlapParams, PalmParams, Llama2Params>;

// Throws ParameterError for n == 0 or L == 0.
void validate(const DefinitionParams& params);
// n for DirectOverlap/Palm, L for Llama2.
std::size_t gram_length(const DefinitionParams& params);
// "direct", "palm" or "llama2".
const char* definition_name(const DefinitionParams& params);
std::optional<Threshold> definition_lambda(const DefinitionParams& params);

struct DocumentVerdict {
  std::string doc_id;
  bool contaminated = false;
  // Direct: 0/1. Palm: max sentence window-hit fraction. Llama2: marked-token
  // fraction (max over sentences in sentence-level mode).
  double fraction = 0.0;
  std::size_t contaminated_token_count = 0;
  std::size_t token_count = 0;
  std::optional<std::vector<bool>> sentence_flags;
};

// Llama 2 style per-sample token marking.
struct SampleVerdict {
  std::string sample_id;
  std::size_t token_count = 0;
  std::vector<std::size_t> marked_token_indices;  // sorted, distinct

  std::size_t marked_count() const { return marked_token_indices.size(); }
  // 0 for an empty token sequence.
  double percentage() const {
    return token_count == 0 ? 0.0
                            : static_cast<double>(marked_count()) / token_count;
  }
};

// PaLM style per-sample window-hit fraction.
struct PalmSampleVerdict {
  std::string sample_id;
  std::size_t hit_windows = 0;
  std::size_t total_windows = 0;
  bool contaminated = false;

  double fraction() const {
    return total_windows == 0
               ? 0.0
               : static_cast<double>(hit_windows) / total_windows;
  }
};

enum class CleanSide { kClean, kNotClean };
enum class DirtySide { kNotDirty, kDirty };

struct BucketLabel {
  CleanSide clean_side = CleanSide::kClean;
  DirtySide dirty_side = DirtySide::kNotDirty;

  friend bool operator==(const BucketLabel&, const BucketLabel&) = default;
};

const char* to_string(CleanSide side);
const char* to_string(DirtySide side);

// Train-side verdicts: a corpus document against an eval-side index whose
// gram length matches the definition. Mismatches throw ConfigError.
DocumentVerdict direct_overlap_verdict(const TokenizedDocument& doc,
                                       const NGramIndex& eval_index);
DocumentVerdict palm_train_verdict(const TokenizedDocument& doc,
                                   const NGramIndex& eval_index,
                                   Threshold lambda);
DocumentVerdict llama2_train_verdict(const TokenizedDocument& doc,
                                     const NGramIndex& eval_index,
                                     const Llama2Params& params);

// Dispatches on the definition. `hashes` are the document's token hashes
// under the index seed; pass them to reuse across several indexes.
DocumentVerdict judge_document(const TokenizedDocument& doc,
                               const NGramIndex& eval_index,
                               const DefinitionParams& params);
DocumentVerdict judge_document(const TokenizedDocument& doc,
                               std::span<const std::uint64_t> hashes,
                               const NGramIndex& eval_index,
                               const DefinitionParams& params);

// Eval-side verdicts: a sample's input-text tokens against a corpus-side index.
PalmSampleVerdict palm_eval_verdict(std::string sample_id,
                                    std::span<const std::string> tokens,
                                    const NGramIndex& corpus_index,
                                    Threshold lambda);

// Marks every token covered by a length-L window present in `index`. Every
// shared run of length >= L is exactly the union of its length-L sub-windows,
// so this marks precisely the tokens inside shared runs of length >= L.
// Throws ParameterError if index.n() != min_match_len.
SampleVerdict llama2_mark_tokens(std::string sample_id,
                                 std::span<const std::string> tokens,
                                 const NGramIndex& index,
                                 std::size_t min_match_len);

// Clean iff percentage < lambda_clean; Dirty iff percentage >= lambda_dirty.
// Throws ParameterError if lambda_clean > lambda_dirty.
BucketLabel bucket_assign(const SampleVerdict& verdict, Threshold lambda_clean,
                          Threshold lambda_dirty);

}  // namespace contamkit
