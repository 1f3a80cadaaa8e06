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

#include "contamkit/corpus_io.hpp"

#include <random>

#include "contamkit/error.hpp"
#include "gtest/gtest.h"
#include "test_util.hpp"

namespace contamkit {
namespace {

using testing::ScratchDir;
using testing::read_file;
using testing::write_file;

TEST(CorpusIoTest, ReadsThreeDocuments) {
  ScratchDir dir("read3");
  write_file(dir / "c.jsonl",
             "{\"id\":\"a\",\"text\":\"one\"}\n"
             "{\"id\":\"b\",\"text\":\"two\",\"meta\":{\"x\":1}}\n"
             "{\"id\":\"c\",\"text\":\"\"}\n");
  auto docs = read_corpus(dir / "c.jsonl");
  ASSERT_EQ(docs.size(), 3u);
  EXPECT_EQ(docs[1].id, "b");
  EXPECT_EQ(docs[1].text, "two");
  EXPECT_EQ(docs[2].text, "");
  EXPECT_EQ(count_documents(dir / "c.jsonl"), 3u);
}

TEST(CorpusIoTest, MalformedLineNamesLine) {
  ScratchDir dir("malformed");
  write_file(dir / "c.jsonl", "{\"id\":\"a\",\"text\":\"one\"}\n{\"id\": oops}\n");
  try {
    read_corpus(dir / "c.jsonl");
    FAIL() << "expected FormatError";
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
}

TEST(CorpusIoTest, MissingFieldsAndEmptyIdAreErrors) {
  EXPECT_THROW(parse_document_line("{\"id\":\"a\"}", 1), FormatError);
  EXPECT_THROW(parse_document_line("{\"id\":\"\",\"text\":\"x\"}", 1), FormatError);
  EXPECT_THROW(parse_document_line("[1,2]", 1), FormatError);
}

TEST(CorpusIoTest, MissingFileIsIoError) {
  EXPECT_THROW(CorpusReader("/nonexistent/contamkit.jsonl"), IoError);
}

TEST(CorpusIoTest, DuplicateEvalIdIsLoadError) {
  ScratchDir dir("dup");
  write_file(dir / "e.jsonl",
             "{\"id\":\"s\",\"dataset\":\"d\",\"text\":\"x\"}\n"
             "{\"id\":\"s\",\"dataset\":\"d\",\"text\":\"y\"}\n");
  EXPECT_THROW(read_eval(dir / "e.jsonl"), FormatError);
}

TEST(CorpusIoTest, EvalOptionalFields) {
  ScratchDir dir("eval");
  write_file(dir / "e.jsonl",
             "{\"id\":\"q1\",\"dataset\":\"mmlu\",\"text\":\"What?\",\"prompt\":\"Answer:\","
             "\"answer\":\"B\",\"choices\":[\"a\",\"b\"]}\n"
             "{\"id\":\"q2\",\"dataset\":\"sst2\",\"text\":\"fine\"}\n");
  auto samples = read_eval(dir / "e.jsonl");
  ASSERT_EQ(samples.size(), 2u);
  EXPECT_EQ(samples[0].prompt, "Answer:");
  EXPECT_EQ(samples[0].answer, "B");
  EXPECT_EQ(samples[0].choices, (std::vector<std::string>{"a", "b"}));
  EXPECT_FALSE(samples[1].prompt.has_value());
  EXPECT_FALSE(samples[1].choices.has_value());
  EXPECT_THROW(parse_eval_line("{\"id\":\"q\",\"dataset\":\"d\",\"text\":\"\"}", 1),
               FormatError);
  EXPECT_EQ(parse_eval_line(serialize_eval_sample(samples[0]), 1), samples[0]);
}

TEST(CorpusIoTest, RawLinesAreWrittenVerbatim) {
  ScratchDir dir("raw");
  const std::string content =
      "{\"text\":\"caf\\u00e9\",  \"id\":\"x\", \"extra\":[1]}\n"
      "{\"id\":\"y\",\"text\":\"line\\nbreak\"}\n";
  write_file(dir / "in.jsonl", content);
  auto docs = read_corpus(dir / "in.jsonl");
  EXPECT_EQ(docs[0].text, "caf\xC3\xA9");
  write_corpus(docs, dir / "out.jsonl");
  EXPECT_EQ(read_file(dir / "out.jsonl"), content);
}

// write -> read -> write over random documents is lossless and byte-stable.
TEST(CorpusIoPropertyTest, RoundTripRandomDocuments) {
  ScratchDir dir("roundtrip");
  std::mt19937_64 rng(11);
  const std::vector<std::string> pieces = {"a", " ", "\"", "\\", "\n", "\t", "\xC3\xA9",
                                           "\xF0\x9F\x98\x80", "/", "{", "}", "\x01"};
  std::vector<Document> docs;
  for (int i = 0; i < 1000; ++i) {
    Document d;
    d.id = "doc-" + std::to_string(rng() % 500);  // ids may repeat
    const int len = static_cast<int>(rng() % 40);
    for (int k = 0; k < len; ++k) d.text += pieces[rng() % pieces.size()];
    docs.push_back(std::move(d));
  }
  write_corpus(docs, dir / "a.jsonl");
  auto back = read_corpus(dir / "a.jsonl");
  ASSERT_EQ(back, docs);
  for (auto& d : back) d.raw_line.clear();
  write_corpus(back, dir / "b.jsonl");
  EXPECT_EQ(read_file(dir / "a.jsonl"), read_file(dir / "b.jsonl"));
}

TEST(AtomicOutputFileTest, UncommittedFileLeavesNothing) {
  ScratchDir dir("atomic");
  {
    AtomicOutputFile f(dir / "out.txt");
    f.stream() << "partial";
  }
  EXPECT_FALSE(std::filesystem::exists(dir / "out.txt"));
  EXPECT_TRUE(std::filesystem::is_empty(dir.path()));
  {
    AtomicOutputFile f(dir / "out.txt");
    f.stream() << "done";
    f.commit();
  }
  EXPECT_EQ(read_file(dir / "out.txt"), "done");
}

}  // namespace
}  // namespace contamkit
