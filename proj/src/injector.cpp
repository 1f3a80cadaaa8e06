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

#include "contamkit/injector.hpp"

#include <algorithm>
#include <random>
#include <unordered_set>

#include "contamkit/error.hpp"
#include "json.hpp"

namespace contamkit {
namespace {

std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Uniform draw in [0, bound) by rejection; std distributions are not
// specified bit-for-bit across standard libraries.
std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

std::string join_parts(const std::vector<std::string>& parts, JoinStyle join) {
  const char* sep = join == JoinStyle::kSpace ? " " : "\n";
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += sep;
    out += parts[i];
  }
  return out;
}

std::string replace_all(std::string s, std::string_view from, const std::string& to) {
  std::size_t pos = 0;
  while ((pos = s.find(from, pos)) != std::string::npos) {
    s.replace(pos, from.size(), to);
    pos += to.size();
  }
  return s;
}

}  // namespace

InjectionMode parse_mode(const std::string& name) {
  if (name == "text") return InjectionMode::kText;
  if (name == "gt" || name == "ground_truth") return InjectionMode::kGroundTruth;
  throw ParameterError("unknown --mode \"" + name + "\" (expected text or gt)");
}

Placement parse_placement(const std::string& name) {
  if (name == "append") return Placement::kAppend;
  if (name == "shuffle") return Placement::kShuffle;
  throw ParameterError("unknown --placement \"" + name +
                       "\" (expected append or shuffle)");
}

const char* to_string(InjectionMode mode) {
  return mode == InjectionMode::kText ? "text" : "gt";
}

std::string injected_id(const EvalSample& sample, std::size_t rep) {
  return "contam/" + sample.dataset + "/" + sample.id + "/" + std::to_string(rep);
}

std::string format_sample(const EvalSample& sample, const InjectionSpec& spec,
                          std::optional<std::size_t> template_choice) {
  if (spec.mode == InjectionMode::kText) {
    std::string out = sample.input_text;
    if (sample.choices) {
      for (const auto& c : *sample.choices) out += "\n" + c;
    }
    return out;
  }

  if (!sample.answer) {
    throw FormatError("sample \"" + sample.id +
                      "\" has no answer; ground-truth injection needs one");
  }
  std::vector<std::string> parts;
  const std::string* tmpl = nullptr;
  if (template_choice) {
    if (*template_choice >= spec.prompt_templates.size()) {
      throw ParameterError("template choice out of range");
    }
    tmpl = &spec.prompt_templates[*template_choice];
  }

  std::vector<std::string> text_parts = {sample.input_text};
  if (sample.choices) {
    text_parts.insert(text_parts.end(), sample.choices->begin(),
                      sample.choices->end());
  }
  if (tmpl != nullptr && tmpl->find(kTextPlaceholder) != std::string::npos) {
    parts.push_back(replace_all(*tmpl, kTextPlaceholder, join_parts(text_parts, spec.join)));
  } else {
    parts = std::move(text_parts);
    if (tmpl != nullptr) {
      parts.push_back(*tmpl);
    } else if (sample.prompt) {
      parts.push_back(*sample.prompt);
    }
  }
  parts.push_back(*sample.answer);
  return join_parts(parts, spec.join);
}

std::optional<std::size_t> template_choice(const EvalSample& sample,
                                           std::size_t rep,
                                           const InjectionSpec& spec) {
  if (spec.mode != InjectionMode::kGroundTruth || spec.prompt_templates.empty()) {
    return std::nullopt;
  }
  std::uint64_t h = token_hash(sample.dataset + '\x1f' + sample.id, spec.seed);
  std::mt19937_64 rng(mix(h ^ mix(rep)));
  return static_cast<std::size_t>(draw_below(rng, spec.prompt_templates.size()));
}

InjectionManifest inject(DocumentStream& corpus, std::size_t corpus_size,
                         std::span<const EvalSample> samples,
                         const InjectionSpec& spec, const DocumentSink& out) {
  // Fail fast before emitting anything.
  if (spec.mode == InjectionMode::kGroundTruth) {
    for (const auto& s : samples) {
      if (!s.answer) {
        throw FormatError("sample \"" + s.id +
                          "\" has no answer; ground-truth injection needs one");
      }
    }
  }

  InjectionManifest manifest;
  std::vector<Document> synthetic;
  synthetic.reserve(spec.factor * samples.size());
  for (std::size_t rep = 0; rep < spec.factor; ++rep) {
    for (const auto& s : samples) {
      auto choice = template_choice(s, rep, spec);
      Document doc;
      doc.id = injected_id(s, rep);
      doc.text = format_sample(s, spec, choice);
      synthetic.push_back(std::move(doc));
      manifest.records.push_back({synthetic.back().id, s.dataset, s.id, rep,
                                  spec.mode, choice});
    }
  }
  std::unordered_set<std::string> injected_ids;
  for (const auto& d : synthetic) injected_ids.insert(d.id);

  // gaps[j]: number of corpus documents emitted before synthetic[j].
  std::vector<std::size_t> gaps(synthetic.size(), corpus_size);
  if (spec.placement == Placement::kShuffle && !synthetic.empty()) {
    std::mt19937_64 rng(mix(spec.seed));
    for (std::size_t i = synthetic.size() - 1; i > 0; --i) {
      std::swap(synthetic[i], synthetic[draw_below(rng, i + 1)]);
    }
    for (auto& g : gaps) g = draw_below(rng, corpus_size + 1);
    std::sort(gaps.begin(), gaps.end());
  }

  std::size_t next = 0;
  std::size_t emitted = 0;
  auto flush_until = [&](std::size_t gap) {
    while (next < synthetic.size() && gaps[next] <= gap) out(synthetic[next++]);
  };
  while (auto doc = corpus.next()) {
    if (injected_ids.contains(doc->id)) {
      throw FormatError("corpus document id \"" + doc->id +
                           "\" collides with an injected id");
    }
    flush_until(emitted);
    out(*doc);
    ++emitted;
  }
  flush_until(SIZE_MAX);
  return manifest;
}

std::string manifest_json_line(const InjectionRecord& record) {
  nlohmann::ordered_json obj;
  obj["injected_id"] = record.injected_id;
  obj["dataset"] = record.dataset;
  obj["sample_id"] = record.sample_id;
  obj["rep"] = record.rep;
  obj["mode"] = to_string(record.mode);
  if (record.template_index) obj["template_index"] = *record.template_index;
  return obj.dump();
}

}  // namespace contamkit
