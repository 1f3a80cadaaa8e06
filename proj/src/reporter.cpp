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

#include "contamkit/reporter.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <memory>

#include "contamkit/error.hpp"
#include "contamkit/tokenizer.hpp"
#include "parallel.hpp"

namespace contamkit {

using nlohmann::ordered_json;

void ScanCounts::add(const DocumentVerdict& verdict) {
  ++docs_scanned;
  tokens_total += verdict.token_count;
  if (verdict.contaminated) {
    ++docs_contaminated;
    tokens_contaminated += verdict.token_count;
  }
  tokens_marked += verdict.contaminated_token_count;
}

ScanCounts& ScanCounts::operator+=(const ScanCounts& other) {
  docs_scanned += other.docs_scanned;
  docs_contaminated += other.docs_contaminated;
  tokens_total += other.tokens_total;
  tokens_contaminated += other.tokens_contaminated;
  tokens_marked += other.tokens_marked;
  return *this;
}

ScanCounts aggregate(std::span<const DocumentVerdict> verdicts) {
  ScanCounts counts;
  for (const auto& v : verdicts) counts.add(v);
  return counts;
}

ordered_json params_json(const DefinitionParams& params) {
  ordered_json obj = ordered_json::object();
  if (const auto* d = std::get_if<DirectOverlapParams>(&params)) {
    obj["n"] = d->n;
  } else if (const auto* p = std::get_if<PalmParams>(&params)) {
    obj["n"] = p->n;
    obj["lambda"] = p->lambda.value();
  } else if (const auto* l = std::get_if<Llama2Params>(&params)) {
    obj["min_match_len"] = l->min_match_len;
    obj["lambda"] = l->lambda.value();
    obj["sentence_level"] = l->sentence_level;
  }
  return obj;
}

std::string scan_report_json(const ScanReport& report) {
  ordered_json obj;
  obj["definition"] = definition_name(report.params);
  obj["params"] = params_json(report.params);
  obj["unit"] = report.unit;
  ordered_json datasets = ordered_json::array();
  for (const auto& d : report.datasets) {
    ordered_json entry;
    entry["dataset"] = d.dataset;
    entry["docs_scanned"] = d.counts.docs_scanned;
    entry["docs_contaminated"] = d.counts.docs_contaminated;
    entry["tokens_total"] = d.counts.tokens_total;
    entry["tokens_contaminated"] = d.counts.tokens_contaminated;
    entry["tokens_marked"] = d.counts.tokens_marked;
    entry["doc_ratio"] = d.counts.doc_ratio();
    entry["token_ratio"] = d.counts.token_ratio();
    datasets.push_back(std::move(entry));
  }
  obj["datasets"] = std::move(datasets);
  return obj.dump(2);
}

std::string verdict_json_line(const std::string& id, bool contaminated,
                              double fraction, std::size_t contaminated_tokens,
                              const DefinitionParams& params,
                              const std::optional<BucketLabel>& bucket) {
  ordered_json obj;
  obj["id"] = id;
  obj["definition"] = definition_name(params);
  obj["params"] = params_json(params);
  obj["contaminated"] = contaminated;
  obj["fraction"] = fraction;
  obj["contaminated_tokens"] = contaminated_tokens;
  if (bucket) {
    obj["bucket"] = {{"clean_side", to_string(bucket->clean_side)},
                     {"dirty_side", to_string(bucket->dirty_side)}};
  }
  return obj.dump();
}

std::string verdict_json_line(const DocumentVerdict& verdict,
                              const DefinitionParams& params) {
  return verdict_json_line(verdict.doc_id, verdict.contaminated, verdict.fraction,
                           verdict.contaminated_token_count, params, std::nullopt);
}

DefinitionFamily parse_family(const std::string& name) {
  if (name == "direct") return DefinitionFamily::kDirect;
  if (name == "palm") return DefinitionFamily::kPalm;
  if (name == "llama2") return DefinitionFamily::kLlama2;
  throw ParameterError("unknown definition \"" + name +
                       "\" (expected direct, palm or llama2)");
}

const char* to_string(DefinitionFamily family) {
  switch (family) {
    case DefinitionFamily::kDirect: return "direct";
    case DefinitionFamily::kPalm: return "palm";
    case DefinitionFamily::kLlama2: return "llama2";
  }
  return "?";
}

std::vector<SweepRow> sweep(DocumentStream& corpus,
                            std::span<const EvalSample> samples,
                            DefinitionFamily family,
                            std::span<const std::size_t> n_values,
                            std::span<const Threshold> lambda_values,
                            const SweepOptions& options) {
  if (n_values.empty()) throw ParameterError("sweep needs at least one n value");
  if (family != DefinitionFamily::kDirect && lambda_values.empty()) {
    throw ParameterError("sweep needs at least one lambda value");
  }

  struct Combo {
    const NGramIndex* index;
    DefinitionParams params;
  };
  std::map<std::size_t, std::unique_ptr<NGramIndex>> indexes;
  std::vector<Combo> combos;
  std::vector<SweepRow> rows;
  for (std::size_t n : n_values) {
    if (n == 0) throw ParameterError("n-gram length must be >= 1");
    auto& slot = indexes[n];
    if (!slot) {
      slot = std::make_unique<NGramIndex>(
          build_eval_index(samples, n, options.seed, options.fields, false));
    }
    auto add = [&](DefinitionParams params, std::optional<Threshold> lambda) {
      combos.push_back({slot.get(), params});
      rows.push_back({to_string(family), n, lambda, {}});
    };
    switch (family) {
      case DefinitionFamily::kDirect:
        add(DirectOverlapParams{n}, std::nullopt);
        break;
      case DefinitionFamily::kPalm:
        for (auto lambda : lambda_values) add(PalmParams{n, lambda}, lambda);
        break;
      case DefinitionFamily::kLlama2:
        for (auto lambda : lambda_values) {
          add(Llama2Params{n, lambda, options.llama2_sentence_level}, lambda);
        }
        break;
    }
  }

  constexpr std::size_t kBatch = 1024;
  std::vector<Document> batch;
  bool done = false;
  while (!done) {
    batch.clear();
    while (batch.size() < kBatch) {
      auto doc = corpus.next();
      if (!doc) {
        done = true;
        break;
      }
      batch.push_back(std::move(*doc));
    }
    auto per_doc = internal::parallel_map<std::vector<DocumentVerdict>>(
        batch.size(), options.workers, [&](std::size_t i) {
          auto tokenized = tokenize_document(batch[i].id, batch[i].text);
          auto hashes = token_hashes(tokenized.tokens, options.seed);
          std::vector<DocumentVerdict> verdicts;
          verdicts.reserve(combos.size());
          for (const auto& combo : combos) {
            verdicts.push_back(
                judge_document(tokenized, hashes, *combo.index, combo.params));
          }
          return verdicts;
        });
    for (const auto& verdicts : per_doc) {
      for (std::size_t r = 0; r < rows.size(); ++r) rows[r].counts.add(verdicts[r]);
    }
  }
  return rows;
}

std::string sweep_csv(std::span<const SweepRow> rows) {
  std::string out = "definition,n,lambda,doc_ratio,token_ratio\n";
  char buf[128];
  for (const auto& row : rows) {
    std::string lambda;
    if (row.lambda) {
      std::snprintf(buf, sizeof(buf), "%g", row.lambda->value());
      lambda = buf;
    }
    std::snprintf(buf, sizeof(buf), "%.6f,%.6f", row.doc_ratio(), row.token_ratio());
    out += row.definition + "," + std::to_string(row.n) + "," + lambda + "," +
           buf + "\n";
  }
  return out;
}

std::vector<SampleVerdict> mark_samples(std::span<const EvalSample> samples,
                                        const NGramIndex& corpus_index,
                                        std::size_t min_match_len) {
  if (corpus_index.source() != IndexSource::kCorpusSide) {
    throw ConfigError("bucketing needs a corpus-side index");
  }
  std::vector<SampleVerdict> verdicts;
  verdicts.reserve(samples.size());
  for (const auto& s : samples) {
    auto tokens = tokenize(s.input_text).tokens;
    verdicts.push_back(llama2_mark_tokens(s.id, tokens, corpus_index, min_match_len));
  }
  return verdicts;
}

BucketCounts count_buckets(std::span<const SampleVerdict> verdicts,
                           Threshold lambda_clean, Threshold lambda_dirty) {
  BucketCounts counts;
  for (const auto& v : verdicts) {
    auto label = bucket_assign(v, lambda_clean, lambda_dirty);
    ++(label.clean_side == CleanSide::kClean ? counts.clean : counts.not_clean);
    ++(label.dirty_side == DirtySide::kDirty ? counts.dirty : counts.not_dirty);
  }
  return counts;
}

BucketCounts export_buckets(std::span<const EvalSample> samples,
                            std::span<const SampleVerdict> verdicts,
                            Threshold lambda_clean, Threshold lambda_dirty,
                            const std::filesystem::path& out_dir) {
  if (samples.size() != verdicts.size()) {
    throw ParameterError("export_buckets needs one verdict per sample");
  }
  if (lambda_clean > lambda_dirty) {
    throw ParameterError("--lambda-clean must not exceed --lambda-dirty");
  }
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());

  AtomicOutputFile clean(out_dir / "clean.jsonl");
  AtomicOutputFile not_clean(out_dir / "not_clean.jsonl");
  AtomicOutputFile not_dirty(out_dir / "not_dirty.jsonl");
  AtomicOutputFile dirty(out_dir / "dirty.jsonl");
  AtomicOutputFile summary(out_dir / "bucket_counts.json");

  BucketCounts counts;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto label = bucket_assign(verdicts[i], lambda_clean, lambda_dirty);
    auto record = ordered_json::parse(serialize_eval_sample(samples[i]));
    record["contamination_percentage"] = verdicts[i].percentage();

    const bool is_clean = label.clean_side == CleanSide::kClean;
    record["bucket"] = to_string(label.clean_side);
    (is_clean ? clean : not_clean).stream() << record.dump() << '\n';
    ++(is_clean ? counts.clean : counts.not_clean);

    const bool is_dirty = label.dirty_side == DirtySide::kDirty;
    record["bucket"] = to_string(label.dirty_side);
    (is_dirty ? dirty : not_dirty).stream() << record.dump() << '\n';
    ++(is_dirty ? counts.dirty : counts.not_dirty);
  }

  ordered_json obj;
  obj["lambda_clean"] = lambda_clean.value();
  obj["lambda_dirty"] = lambda_dirty.value();
  obj["samples"] = samples.size();
  obj["clean"] = counts.clean;
  obj["not_clean"] = counts.not_clean;
  obj["not_dirty"] = counts.not_dirty;
  obj["dirty"] = counts.dirty;
  summary.stream() << obj.dump(2) << '\n';

  clean.commit();
  not_clean.commit();
  not_dirty.commit();
  dirty.commit();
  summary.commit();
  return counts;
}

}  // namespace contamkit
