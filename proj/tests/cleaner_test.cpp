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

#include "contamkit/cleaner.hpp"

#include <random>
#include <set>

#include "contamkit/error.hpp"
#include "contamkit/reporter.hpp"
#include "gtest/gtest.h"
#include "oracle.hpp"
#include "test_util.hpp"

namespace contamkit {
namespace {

struct Filtered {
  std::vector<Document> kept;
  std::vector<std::string> removed_ids;
  RemovalReport report;
};

Filtered filter(const std::vector<Document>& corpus, const NGramIndex& idx,
                const DefinitionParams& params, std::size_t workers = 1) {
  Filtered f;
  VectorDocumentStream stream(corpus);
  f.report = filter_corpus(
      stream, idx, params, [&](const Document& d) { f.kept.push_back(d); },
      {workers, 7}, [&](Document& d, DocumentVerdict&) { f.removed_ids.push_back(d.id); });
  return f;
}

// 100 docs; exactly 5 carry a verbatim 10-token eval sentence.
std::pair<std::vector<Document>, std::vector<EvalSample>> planted_corpus() {
  std::vector<EvalSample> samples;
  for (int s = 0; s < 5; ++s) {
    std::string text;
    for (int k = 0; k < 10; ++k) text += (k ? " e" : "e") + std::to_string(s * 10 + k);
    samples.push_back({"s" + std::to_string(s), "toy", text, std::nullopt, std::nullopt, std::nullopt});
  }
  std::vector<Document> docs;
  for (int d = 0; d < 100; ++d) {
    std::string text = "filler words for document " + std::to_string(d) + ".";
    if (d % 20 == 3) text += " " + samples[d / 20].input_text + ". trailing words";
    docs.push_back({"d" + std::to_string(d), text, ""});
  }
  return {docs, samples};
}

TEST(FilterTest, PlantedContaminationRatio) {
  auto [docs, samples] = planted_corpus();
  auto idx = build_eval_index(samples, 8, 1, EvalFields::kTextAndChoices, false);
  auto f = filter(docs, idx, DirectOverlapParams{8});
  EXPECT_EQ(f.kept.size(), 95u);
  EXPECT_EQ(f.report.docs_total, 100u);
  EXPECT_EQ(f.report.docs_removed, 5u);
  EXPECT_EQ(f.report.doc_ratio(), 0.05);
  EXPECT_EQ(f.removed_ids, (std::vector<std::string>{"d3", "d23", "d43", "d63", "d83"}));
  std::size_t removed_tokens = 0;
  for (const auto& d : docs) {
    if (std::find(f.removed_ids.begin(), f.removed_ids.end(), d.id) != f.removed_ids.end()) {
      removed_tokens += tokenize(d.text).tokens.size();
    }
  }
  EXPECT_EQ(f.report.tokens_removed, removed_tokens);
}

TEST(FilterTest, DisjointVocabularyIsIdentity) {
  auto [docs, samples] = planted_corpus();
  std::vector<EvalSample> other = {{"z", "toy", "zz1 zz2 zz3 zz4 zz5 zz6 zz7 zz8 zz9",
                                    std::nullopt, std::nullopt, std::nullopt}};
  auto idx = build_eval_index(other, 8, 1, EvalFields::kTextAndChoices, false);
  auto f = filter(docs, idx, DirectOverlapParams{8});
  EXPECT_EQ(f.kept, docs);
  EXPECT_EQ(f.report.doc_ratio(), 0.0);
  EXPECT_EQ(f.report.token_ratio(), 0.0);
}

TEST(FilterTest, MismatchedIndexIsConfigError) {
  auto [docs, samples] = planted_corpus();
  auto idx = build_eval_index(samples, 8, 1, EvalFields::kTextAndChoices, false);
  EXPECT_THROW(filter(docs, idx, Llama2Params{}), ConfigError);
  std::vector<TokenSequence> seqs = {{"a", "b", "c", "d", "e", "f", "g", "h"}};
  auto corpus_side = build_index(seqs, 8, 1, IndexSource::kCorpusSide, false);
  EXPECT_THROW(filter(docs, corpus_side, DirectOverlapParams{8}), ConfigError);
}

TEST(FilterTest, EmptyCorpus) {
  auto [docs, samples] = planted_corpus();
  auto idx = build_eval_index(samples, 8, 1, EvalFields::kTextAndChoices, false);
  auto f = filter({}, idx, DirectOverlapParams{8});
  EXPECT_EQ(f.report.docs_total, 0u);
  EXPECT_EQ(f.report.doc_ratio(), 0.0);
  EXPECT_EQ(f.report.token_ratio(), 0.0);
}

TEST(FilterPropertyTest, FixpointIdempotenceComplementarity) {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 20; ++trial) {
    auto fx = oracle::random_fixture(rng, 150, 60, 10);
    auto docs = testing::to_documents(fx.docs);
    auto samples = testing::to_samples(fx.samples);
    const std::size_t n = 2 + rng() % 8;
    auto idx = build_eval_index(samples, n, 5, EvalFields::kTextAndChoices, false);
    const DefinitionParams all[] = {
        DirectOverlapParams{n}, PalmParams{n, Threshold::from_double(0.5)},
        Llama2Params{n, Threshold::from_double(0.25), false}};
    for (const auto& params : all) {
      auto once = filter(docs, idx, params);
      auto twice = filter(once.kept, idx, params);
      ASSERT_EQ(twice.report.docs_removed, 0u);
      ASSERT_EQ(twice.kept, once.kept);
      ASSERT_EQ(once.report.docs_removed + once.kept.size(), once.report.docs_total);
      // Removed set equals the contaminated set of a standalone scan.
      std::vector<std::string> scanned;
      VectorDocumentStream stream(docs);
      scan_corpus(stream, idx, params, {}, [&](Document& d, DocumentVerdict& v) {
        if (v.contaminated) scanned.push_back(d.id);
      });
      ASSERT_EQ(scanned, once.removed_ids);
    }
  }
}

TEST(FilterPropertyTest, PalmRemovalIsSubsetOfDirect) {
  std::mt19937_64 rng(67);
  for (int trial = 0; trial < 20; ++trial) {
    auto fx = oracle::random_fixture(rng, 150, 80, 10);
    auto docs = testing::to_documents(fx.docs);
    auto samples = testing::to_samples(fx.samples);
    const std::size_t n = 2 + rng() % 10;
    auto idx = build_eval_index(samples, n, 5, EvalFields::kTextAndChoices, false);
    auto direct = filter(docs, idx, DirectOverlapParams{n});
    std::set<std::string> direct_set(direct.removed_ids.begin(), direct.removed_ids.end());
    for (double lambda : {0.0, 0.25, 0.7}) {
      auto palm = filter(docs, idx, PalmParams{n, Threshold::from_double(lambda)});
      for (const auto& id : palm.removed_ids) ASSERT_TRUE(direct_set.count(id)) << id;
    }
  }
}

TEST(FilterPropertyTest, Llama2RemovalNonIncreasingInLambda) {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 20; ++trial) {
    auto fx = oracle::random_fixture(rng, 150, 60, 10);
    auto docs = testing::to_documents(fx.docs);
    auto samples = testing::to_samples(fx.samples);
    const std::size_t L = 2 + rng() % 10;
    auto idx = build_eval_index(samples, L, 5, EvalFields::kTextAndChoices, false);
    std::size_t prev_tokens = SIZE_MAX;
    std::set<std::string> prev_ids;
    bool first = true;
    for (double lambda : {0.0, 0.1, 0.25, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0}) {
      auto f = filter(docs, idx, Llama2Params{L, Threshold::from_double(lambda), false});
      std::set<std::string> ids(f.removed_ids.begin(), f.removed_ids.end());
      ASSERT_LE(f.report.tokens_removed, prev_tokens);
      if (!first) {
        for (const auto& id : ids) ASSERT_TRUE(prev_ids.count(id));
      }
      prev_tokens = f.report.tokens_removed;
      prev_ids = ids;
      first = false;
    }
  }
}

TEST(FilterTest, WorkerCountDoesNotChangeResults) {
  std::mt19937_64 rng(73);
  auto fx = oracle::random_fixture(rng, 500, 100, 20);
  auto docs = testing::to_documents(fx.docs);
  auto samples = testing::to_samples(fx.samples);
  auto idx = build_eval_index(samples, 4, 5, EvalFields::kTextAndChoices, false);
  auto base = filter(docs, idx, DirectOverlapParams{4}, 1);
  for (std::size_t w : {2u, 4u, 8u}) {
    auto f = filter(docs, idx, DirectOverlapParams{4}, w);
    EXPECT_EQ(f.kept, base.kept);
    EXPECT_EQ(removal_report_json(f.report), removal_report_json(base.report));
  }
}

}  // namespace
}  // namespace contamkit
