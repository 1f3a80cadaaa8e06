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

#include <random>
#include <set>
#include <sstream>

#include "contamkit/error.hpp"
#include "contamkit/ngram_index.hpp"
#include "gtest/gtest.h"
#include "oracle.hpp"
#include "test_util.hpp"

namespace contamkit {
namespace {

using Tokens = std::vector<std::string>;

TEST(ExtractNgramsTest, WindowCounts) {
  const Tokens five = {"a", "b", "c", "d", "e"};
  auto fps = extract_ngrams(five, 3, kDefaultSeed);
  ASSERT_EQ(fps.size(), 3u);
  EXPECT_EQ(fps[0], fingerprint(std::span(five).subspan(0, 3), kDefaultSeed));
  EXPECT_EQ(fps[1], fingerprint(std::span(five).subspan(1, 3), kDefaultSeed));
  EXPECT_EQ(fps[2], fingerprint(std::span(five).subspan(2, 3), kDefaultSeed));
  EXPECT_TRUE(extract_ngrams(Tokens{"a", "b"}, 3, kDefaultSeed).empty());
  EXPECT_EQ(extract_ngrams(Tokens(10, "x"), 8, kDefaultSeed).size(), 3u);
  EXPECT_THROW(extract_ngrams(five, 0, kDefaultSeed), ParameterError);
}

TEST(ExtractNgramsPropertyTest, WindowCountLaw) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    auto t = oracle::random_words(rng, rng() % 30, 5);
    std::size_t n = 1 + rng() % 15;
    std::size_t expect = t.size() >= n ? t.size() - n + 1 : 0;
    ASSERT_EQ(extract_ngrams(t, n, trial).size(), expect);
  }
}

TEST(RollingHasherTest, RollMatchesRecompute) {
  const Tokens abc = {"a", "b", "c"};
  auto h = token_hashes(abc, kDefaultSeed);
  RollingHasher r(2, kDefaultSeed);
  r.init(std::span(h).first(2));
  EXPECT_EQ(r.roll(h[0], h[2]), fingerprint(std::span(abc).subspan(1, 2), kDefaultSeed));

  RollingHasher one(1, kDefaultSeed);
  one.init(std::span(h).first(1));
  EXPECT_EQ(one.roll(h[0], h[1]), fingerprint(std::span(abc).subspan(1, 1), kDefaultSeed));
}

TEST(RollingHasherTest, RollAcrossLongDocument) {
  std::mt19937_64 rng(5);
  auto doc = oracle::random_words(rng, 1000, 50);
  for (std::size_t n : {1u, 2u, 13u, 64u}) {
    auto fps = extract_ngrams(doc, n, 99);
    ASSERT_EQ(fps.size(), doc.size() - n + 1);
    for (std::size_t i = 0; i < fps.size(); ++i) {
      ASSERT_EQ(fps[i], fingerprint(std::span(doc).subspan(i, n), 99)) << "n=" << n << " i=" << i;
    }
  }
}

TEST(RollingHasherTest, SeedChangesFingerprints) {
  const Tokens w = {"x", "y", "z"};
  EXPECT_NE(fingerprint(w, 1), fingerprint(w, 2));
  EXPECT_EQ(fingerprint(w, 1), fingerprint(w, 1));
  EXPECT_NE(fingerprint(Tokens{"ab", "c"}, 1), fingerprint(Tokens{"a", "bc"}, 1));
}

TEST(NGramIndexTest, BuildCountsAndDedup) {
  std::vector<TokenSequence> one = {Tokens(10, "")};
  for (int i = 0; i < 10; ++i) one[0][i] = "t" + std::to_string(i);
  auto idx = build_index(one, 8, kDefaultSeed, IndexSource::kEvalSide, false);
  EXPECT_EQ(idx.entry_count(), 3u);

  std::vector<TokenSequence> twice = {one[0], one[0]};
  EXPECT_EQ(build_index(twice, 8, kDefaultSeed, IndexSource::kEvalSide, false).entry_count(), 3u);
}

TEST(NGramIndexTest, ContainsAndErrors) {
  std::vector<TokenSequence> src = {{"a", "b", "c", "d"}};
  auto idx = build_index(src, 2, kDefaultSeed, IndexSource::kCorpusSide, true);
  EXPECT_TRUE(idx.contains(Tokens{"b", "c"}));
  EXPECT_FALSE(idx.contains(Tokens{"c", "b"}));
  EXPECT_FALSE(idx.contains(Tokens{"x", "y"}));
  EXPECT_THROW(idx.contains(Tokens{"a"}), ParameterError);
  EXPECT_THROW(NGramIndexBuilder(0, 1, IndexSource::kEvalSide, false), ParameterError);
  for (const auto& [fp, seqs] : idx.verify_store()) {
    for (const auto& s : seqs) EXPECT_EQ(s.size(), 2u);
  }
}

TEST(NGramIndexTest, WindowsDoNotCrossSequences) {
  std::vector<TokenSequence> src = {{"a", "b"}, {"c", "d"}};
  auto idx = build_index(src, 2, kDefaultSeed, IndexSource::kEvalSide, false);
  EXPECT_FALSE(idx.contains(Tokens{"b", "c"}));
  EXPECT_EQ(idx.entry_count(), 2u);
}

TEST(NGramIndexTest, EvalFieldsAreWindowedSeparately) {
  EvalSample s{"q", "ds", "alpha beta", "Prompt here", "gamma", std::vector<std::string>{"delta eps"}};
  auto text_only = build_eval_index(std::span(&s, 1), 2, 1, EvalFields::kTextAndChoices, false);
  EXPECT_TRUE(text_only.contains(Tokens{"alpha", "beta"}));
  EXPECT_TRUE(text_only.contains(Tokens{"delta", "eps"}));
  EXPECT_FALSE(text_only.contains(Tokens{"beta", "delta"}));
  EXPECT_FALSE(text_only.contains(Tokens{"prompt", "here"}));
  auto all = build_eval_index(std::span(&s, 1), 2, 1, EvalFields::kAll, false);
  EXPECT_TRUE(all.contains(Tokens{"prompt", "here"}));
  EXPECT_FALSE(all.contains(Tokens{"here", "gamma"}));
}

// Membership equals an explicit set of n-gram strings, for all n in 1..13.
TEST(NGramIndexPropertyTest, MembershipMatchesExplicitSet) {
  std::mt19937_64 rng(17);
  std::vector<oracle::Doc> docs;
  for (int d = 0; d < 1000; ++d) {
    oracle::Doc doc;
    doc.words = oracle::random_words(rng, rng() % 30, 6);
    docs.push_back(doc);
  }
  std::vector<TokenSequence> seqs;
  for (const auto& d : docs) seqs.push_back(d.words);
  for (std::size_t n = 1; n <= 13; ++n) {
    auto idx = build_index(seqs, n, 1234, IndexSource::kCorpusSide, false);
    auto grams = oracle::corpus_grams(docs, n);
    ASSERT_EQ(idx.entry_count(), grams.size()) << "n=" << n;
    for (int q = 0; q < 2000; ++q) {
      auto w = oracle::random_words(rng, n, 6);
      ASSERT_EQ(idx.contains(w), grams.count(oracle::join(w, 0, n)) > 0);
    }
  }
}

TEST(NGramIndexPropertyTest, SubGramClosure) {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<TokenSequence> seqs = {oracle::random_words(rng, 40, 8)};
    std::size_t n = 1 + rng() % 10;
    auto idx = build_index(seqs, n, 5, IndexSource::kEvalSide, false);
    for (std::size_t i = 0; i + n + 1 <= seqs[0].size(); ++i) {
      auto w = std::span(seqs[0]).subspan(i, n + 1);
      ASSERT_TRUE(idx.contains(w.first(n)));
      ASSERT_TRUE(idx.contains(w.last(n)));
    }
  }
}

TEST(NGramIndexPropertyTest, VerifyModeHasNoFalsePositives) {
  std::mt19937_64 rng(23);
  std::vector<TokenSequence> seqs;
  std::set<std::string> inserted;
  for (int i = 0; i < 2000; ++i) {
    auto w = oracle::random_words(rng, 3, 1000);
    inserted.insert(oracle::join(w, 0, 3));
    seqs.push_back(std::move(w));
  }
  auto idx = build_index(seqs, 3, 77, IndexSource::kEvalSide, true);
  std::size_t false_positives = 0;
  for (int q = 0; q < 1'000'000; ++q) {
    auto w = oracle::random_words(rng, 3, 1000);
    bool truth = inserted.count(oracle::join(w, 0, 3)) > 0;
    bool got = idx.contains(w);
    if (got && !truth) ++false_positives;
    ASSERT_FALSE(!got && truth);
  }
  EXPECT_EQ(false_positives, 0u);
}

TEST(NGramIndexIoTest, RoundTripPreservesMembership) {
  testing::ScratchDir dir("index_io");
  std::mt19937_64 rng(29);
  std::vector<TokenSequence> seqs;
  for (int i = 0; i < 200; ++i) seqs.push_back(oracle::random_words(rng, rng() % 20, 10));
  for (bool verify : {false, true}) {
    auto idx = build_index(seqs, 4, 31337, IndexSource::kCorpusSide, verify);
    save_index(idx, dir / "x.idx");
    auto back = load_index(dir / "x.idx");
    EXPECT_EQ(back.n(), 4u);
    EXPECT_EQ(back.seed(), 31337u);
    EXPECT_EQ(back.source(), IndexSource::kCorpusSide);
    EXPECT_EQ(back.has_verify_store(), verify);
    EXPECT_EQ(back.entry_count(), idx.entry_count());
    for (int q = 0; q < 5000; ++q) {
      auto w = oracle::random_words(rng, 4, 10);
      ASSERT_EQ(back.contains(w), idx.contains(w));
    }
  }
}

TEST(NGramIndexIoTest, HeaderIsLittleEndianAndBitExact) {
  std::vector<TokenSequence> seqs = {{"a", "b"}};
  auto idx = build_index(seqs, 2, 0x0102030405060708ULL, IndexSource::kEvalSide, false);
  std::ostringstream out;
  write_index(idx, out);
  const std::string bytes = out.str();
  ASSERT_EQ(bytes.size(), 8u + 4 + 4 + 8 + 1 + 1 + 2 + 8 + 8);
  EXPECT_EQ(bytes.substr(0, 8), std::string("CKNGIDX\0", 8));
  EXPECT_EQ(bytes[8], 1);   // version
  EXPECT_EQ(bytes[12], 2);  // n
  EXPECT_EQ(bytes[16], 0x08);
  EXPECT_EQ(bytes[23], 0x01);
  EXPECT_EQ(bytes[24], 0);  // eval side
  EXPECT_EQ(bytes[28], 1);  // entry_count
  std::uint64_t fp = 0;
  for (int i = 0; i < 8; ++i) fp |= std::uint64_t(static_cast<unsigned char>(bytes[36 + i])) << (8 * i);
  EXPECT_EQ(fp, idx.fingerprints()[0].value);
}

TEST(NGramIndexIoTest, CorruptFilesAreRejected) {
  std::vector<TokenSequence> seqs = {{"a", "b", "c"}};
  auto idx = build_index(seqs, 2, 1, IndexSource::kEvalSide, true);
  std::ostringstream out;
  write_index(idx, out);
  const std::string good = out.str();

  for (std::size_t cut : {std::size_t{0}, std::size_t{5}, std::size_t{20}, good.size() - 1}) {
    std::istringstream in(good.substr(0, cut));
    EXPECT_THROW(read_index(in), FormatError) << "cut=" << cut;
  }
  std::string bad_version = good;
  bad_version[8] = 9;
  std::istringstream in(bad_version);
  EXPECT_THROW(read_index(in), FormatError);
  std::string bad_magic = good;
  bad_magic[0] = 'X';
  std::istringstream in2(bad_magic);
  EXPECT_THROW(read_index(in2), FormatError);
}

}  // namespace
}  // namespace contamkit
