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

#include "contamkit/definitions.hpp"

#include <algorithm>
#include <cmath>

#include "contamkit/error.hpp"

namespace contamkit {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_index(const NGramIndex& index, IndexSource source, std::size_t n,
                   const char* what) {
  if (index.source() != source) {
    throw ConfigError(std::string(what) + " needs a " + to_string(source) +
                      "-side index, got a " + to_string(index.source()) +
                      "-side index");
  }
  if (index.n() != n) {
    throw ConfigError(std::string(what) + " needs gram length " +
                      std::to_string(n) + ", index has n = " +
                      std::to_string(index.n()));
  }
}

// hit[i] is true when the window starting at token i is in the index.
std::vector<char> window_hits(std::span<const std::string> tokens,
                              std::span<const std::uint64_t> hashes,
                              const NGramIndex& index) {
  const std::size_t n = index.n();
  std::vector<char> hits;
  if (tokens.size() < n) return hits;
  auto fps = window_fingerprints(hashes, n, index.seed());
  hits.resize(fps.size());
  for (std::size_t i = 0; i < fps.size(); ++i) {
    hits[i] = index.contains(fps[i], tokens.subspan(i, n));
  }
  return hits;
}

// Token positions [begin, end) covered by hit windows starting in
// [begin, end - n], i.e. windows lying inside the range.
std::size_t mark_range(std::span<const char> hits, std::size_t n,
                       std::size_t begin, std::size_t end,
                       std::vector<char>& marked) {
  std::size_t count = 0;
  if (end - begin < n) return 0;
  // covered_until: first position not yet covered by a hitting window.
  std::size_t covered_until = begin;
  for (std::size_t i = begin; i + n <= end; ++i) {
    if (!hits[i]) continue;
    for (std::size_t p = std::max(i, covered_until); p < i + n; ++p) {
      marked[p] = 1;
      ++count;
    }
    covered_until = i + n;
  }
  return count;
}

std::vector<std::size_t> sentence_of_tokens(const TokenizedDocument& doc) {
  std::vector<std::size_t> owner(doc.size());
  for (std::size_t s = 0; s < doc.sentences.size(); ++s) {
    for (std::size_t t = doc.sentences[s].begin; t < doc.sentences[s].end; ++t) {
      owner[t] = s;
    }
  }
  return owner;
}

DocumentVerdict direct_impl(const TokenizedDocument& doc,
                            std::span<const std::uint64_t> hashes,
                            const NGramIndex& index) {
  DocumentVerdict v;
  v.doc_id = doc.doc_id;
  v.token_count = doc.size();
  std::vector<bool> flags(doc.sentences.size(), false);
  auto hits = window_hits(doc.tokens, hashes, index);
  if (!hits.empty()) {
    auto owner = sentence_of_tokens(doc);
    const std::size_t n = index.n();
    for (std::size_t i = 0; i < hits.size(); ++i) {
      if (!hits[i]) continue;
      for (std::size_t s = owner[i]; s <= owner[i + n - 1]; ++s) flags[s] = true;
    }
  }
  for (std::size_t s = 0; s < flags.size(); ++s) {
    if (flags[s]) {
      v.contaminated = true;
      v.contaminated_token_count += doc.sentences[s].size();
    }
  }
  v.fraction = v.contaminated ? 1.0 : 0.0;
  v.sentence_flags = std::move(flags);
  return v;
}

DocumentVerdict palm_impl(const TokenizedDocument& doc,
                          std::span<const std::uint64_t> hashes,
                          const NGramIndex& index, Threshold lambda) {
  DocumentVerdict v;
  v.doc_id = doc.doc_id;
  v.token_count = doc.size();
  std::vector<bool> flags(doc.sentences.size(), false);
  auto hits = window_hits(doc.tokens, hashes, index);
  const std::size_t n = index.n();
  for (std::size_t s = 0; s < doc.sentences.size(); ++s) {
    const auto& range = doc.sentences[s];
    if (range.size() < n) continue;
    const std::size_t windows = range.size() - n + 1;
    std::size_t hit = 0;
    for (std::size_t i = range.begin; i + n <= range.end; ++i) hit += hits[i] ? 1 : 0;
    v.fraction = std::max(v.fraction, static_cast<double>(hit) / windows);
    if (lambda.exceeded_by(hit, windows)) {
      flags[s] = true;
      v.contaminated = true;
      v.contaminated_token_count += range.size();
    }
  }
  v.sentence_flags = std::move(flags);
  return v;
}

DocumentVerdict llama2_impl(const TokenizedDocument& doc,
                            std::span<const std::uint64_t> hashes,
                            const NGramIndex& index, const Llama2Params& params) {
  DocumentVerdict v;
  v.doc_id = doc.doc_id;
  v.token_count = doc.size();
  auto hits = window_hits(doc.tokens, hashes, index);
  const std::size_t n = index.n();
  std::vector<char> marked(doc.size(), 0);

  if (!params.sentence_level) {
    std::size_t count = hits.empty() ? 0 : mark_range(hits, n, 0, doc.size(), marked);
    v.contaminated_token_count = count;
    v.fraction = doc.size() == 0 ? 0.0 : static_cast<double>(count) / doc.size();
    v.contaminated = doc.size() > 0 && params.lambda.reached_by(count, doc.size());
    return v;
  }

  std::vector<bool> flags(doc.sentences.size(), false);
  for (std::size_t s = 0; s < doc.sentences.size(); ++s) {
    const auto& range = doc.sentences[s];
    std::size_t count =
        hits.empty() ? 0 : mark_range(hits, n, range.begin, range.end, marked);
    v.contaminated_token_count += count;
    v.fraction = std::max(v.fraction, static_cast<double>(count) / range.size());
    if (params.lambda.reached_by(count, range.size())) {
      flags[s] = true;
      v.contaminated = true;
    }
  }
  v.sentence_flags = std::move(flags);
  return v;
}

}  // namespace

Threshold Threshold::from_double(double lambda) {
  if (!std::isfinite(lambda) || lambda < 0.0 || lambda > 1.0) {
    throw ParameterError("lambda must lie in [0, 1], got " +
                         std::to_string(lambda));
  }
  return from_ppm(static_cast<std::uint64_t>(std::llround(lambda * kScale)));
}

void validate(const DefinitionParams& params) {
  std::visit(Overloaded{
                 [](const DirectOverlapParams& p) {
                   if (p.n == 0) throw ParameterError("--n must be >= 1");
                 },
                 [](const PalmParams& p) {
                   if (p.n == 0) throw ParameterError("--n must be >= 1");
                 },
                 [](const Llama2Params& p) {
                   if (p.min_match_len == 0) {
                     throw ParameterError("--min-match-len must be >= 1");
                   }
                 },
             },
             params);
}

std::size_t gram_length(const DefinitionParams& params) {
  return std::visit(Overloaded{
                        [](const DirectOverlapParams& p) { return p.n; },
                        [](const PalmParams& p) { return p.n; },
                        [](const Llama2Params& p) { return p.min_match_len; },
                    },
                    params);
}

const char* definition_name(const DefinitionParams& params) {
  return std::visit(Overloaded{
                        [](const DirectOverlapParams&) { return "direct"; },
                        [](const PalmParams&) { return "palm"; },
                        [](const Llama2Params&) { return "llama2"; },
                    },
                    params);
}

std::optional<Threshold> definition_lambda(const DefinitionParams& params) {
  return std::visit(
      Overloaded{
          [](const DirectOverlapParams&) -> std::optional<Threshold> {
            return std::nullopt;
          },
          [](const PalmParams& p) -> std::optional<Threshold> { return p.lambda; },
          [](const Llama2Params& p) -> std::optional<Threshold> {
            return p.lambda;
          },
      },
      params);
}

const char* to_string(CleanSide side) {
  return side == CleanSide::kClean ? "clean" : "not_clean";
}

const char* to_string(DirtySide side) {
  return side == DirtySide::kDirty ? "dirty" : "not_dirty";
}

DocumentVerdict direct_overlap_verdict(const TokenizedDocument& doc,
                                       const NGramIndex& eval_index) {
  return judge_document(doc, eval_index, DirectOverlapParams{eval_index.n()});
}

DocumentVerdict palm_train_verdict(const TokenizedDocument& doc,
                                   const NGramIndex& eval_index,
                                   Threshold lambda) {
  return judge_document(doc, eval_index, PalmParams{eval_index.n(), lambda});
}

DocumentVerdict llama2_train_verdict(const TokenizedDocument& doc,
                                     const NGramIndex& eval_index,
                                     const Llama2Params& params) {
  return judge_document(doc, eval_index, params);
}

DocumentVerdict judge_document(const TokenizedDocument& doc,
                               const NGramIndex& eval_index,
                               const DefinitionParams& params) {
  auto hashes = token_hashes(doc.tokens, eval_index.seed());
  return judge_document(doc, hashes, eval_index, params);
}

DocumentVerdict judge_document(const TokenizedDocument& doc,
                               std::span<const std::uint64_t> hashes,
                               const NGramIndex& eval_index,
                               const DefinitionParams& params) {
  validate(params);
  require_index(eval_index, IndexSource::kEvalSide, gram_length(params),
                definition_name(params));
  return std::visit(
      Overloaded{
          [&](const DirectOverlapParams&) {
            return direct_impl(doc, hashes, eval_index);
          },
          [&](const PalmParams& p) {
            return palm_impl(doc, hashes, eval_index, p.lambda);
          },
          [&](const Llama2Params& p) {
            return llama2_impl(doc, hashes, eval_index, p);
          },
      },
      params);
}

PalmSampleVerdict palm_eval_verdict(std::string sample_id,
                                    std::span<const std::string> tokens,
                                    const NGramIndex& corpus_index,
                                    Threshold lambda) {
  require_index(corpus_index, IndexSource::kCorpusSide, corpus_index.n(), "palm");
  PalmSampleVerdict v;
  v.sample_id = std::move(sample_id);
  auto hashes = token_hashes(tokens, corpus_index.seed());
  auto hits = window_hits(tokens, hashes, corpus_index);
  v.total_windows = hits.size();
  v.hit_windows = static_cast<std::size_t>(std::count(hits.begin(), hits.end(), 1));
  v.contaminated = v.total_windows > 0 &&
                   lambda.reached_by(v.hit_windows, v.total_windows);
  return v;
}

SampleVerdict llama2_mark_tokens(std::string sample_id,
                                 std::span<const std::string> tokens,
                                 const NGramIndex& index,
                                 std::size_t min_match_len) {
  if (min_match_len == 0 || index.n() != min_match_len) {
    throw ParameterError("llama2 marking needs an index of gram length " +
                         std::to_string(min_match_len) + ", index has n = " +
                         std::to_string(index.n()));
  }
  SampleVerdict v;
  v.sample_id = std::move(sample_id);
  v.token_count = tokens.size();
  auto hashes = token_hashes(tokens, index.seed());
  auto hits = window_hits(tokens, hashes, index);
  if (hits.empty()) return v;
  std::vector<char> marked(tokens.size(), 0);
  mark_range(hits, min_match_len, 0, tokens.size(), marked);
  for (std::size_t i = 0; i < marked.size(); ++i) {
    if (marked[i]) v.marked_token_indices.push_back(i);
  }
  return v;
}

BucketLabel bucket_assign(const SampleVerdict& verdict, Threshold lambda_clean,
                          Threshold lambda_dirty) {
  if (lambda_clean > lambda_dirty) {
    throw ParameterError("--lambda-clean must not exceed --lambda-dirty");
  }
  BucketLabel label;
  const std::size_t marked = verdict.marked_count();
  const std::size_t total = verdict.token_count;
  // An empty sample has percentage 0.
  const bool reaches_clean =
      total == 0 ? lambda_clean.ppm() == 0 : lambda_clean.reached_by(marked, total);
  const bool reaches_dirty =
      total == 0 ? lambda_dirty.ppm() == 0 : lambda_dirty.reached_by(marked, total);
  label.clean_side = reaches_clean ? CleanSide::kNotClean : CleanSide::kClean;
  label.dirty_side = reaches_dirty ? DirtySide::kDirty : DirtySide::kNotDirty;
  return label;
}

}  // namespace contamkit
