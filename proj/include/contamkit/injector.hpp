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
#include <vector>

#include "contamkit/corpus_io.hpp"
#include "contamkit/ngram.hpp"

namespace contamkit {

enum class InjectionMode { kText, kGroundTruth };
enum class Placement { kAppend, kShuffle };
enum class JoinStyle { kSpace, kNewline };

InjectionMode parse_mode(const std::string& name);        // "text" | "gt"
Placement parse_placement(const std::string& name);       // "append" | "shuffle"
const char* to_string(InjectionMode mode);

inline constexpr std::string_view kTextPlaceholder = "{text}";

struct InjectionSpec {
  InjectionMode mode = InjectionMode::kText;
  std::size_t factor = 1;  // contamination factor k
  std::uint64_t seed = kDefaultSeed;
  // Ground-truth mode only. A template containing "{text}" is rendered with
  // the sample text substituted; one without it stands in for the prompt.
  std::vector<std::string> prompt_templates;
  Placement placement = Placement::kShuffle;
  JoinStyle join = JoinStyle::kSpace;
};

struct InjectionRecord {
  std::string injected_id;
  std::string dataset;
  std::string sample_id;
  std::size_t rep = 0;
  InjectionMode mode = InjectionMode::kText;
  std::optional<std::size_t> template_index;
};

struct InjectionManifest {
  std::vector<InjectionRecord> records;
};

std::string injected_id(const EvalSample& sample, std::size_t rep);

// Text mode: input text, then each answer choice on its own line.
// Ground-truth mode: input text, choices, prompt, answer joined by the join
// separator. Throws FormatError (naming the sample) if ground truth is
// requested for a sample without an answer.
std::string format_sample(const EvalSample& sample, const InjectionSpec& spec,
                          std::optional<std::size_t> template_choice = std::nullopt);

// Template drawn for a (sample, rep) pair; nullopt without templates or in
// text mode. Depends only on the seed and the pair, not on visiting order.
std::optional<std::size_t> template_choice(const EvalSample& sample,
                                           std::size_t rep,
                                           const InjectionSpec& spec);

// Emits every corpus document once plus factor x |samples| synthetic
// documents. `corpus_size` must be the number of documents in `corpus`
// (needed to place shuffled documents in one pass). Throws FormatError if
// a corpus document id collides with an injected id.
InjectionManifest inject(DocumentStream& corpus, std::size_t corpus_size,
                         std::span<const EvalSample> samples,
                         const InjectionSpec& spec, const DocumentSink& out);

std::string manifest_json_line(const InjectionRecord& record);

}  // namespace contamkit
