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
#include <string>
#include <string_view>
#include <vector>

namespace contamkit {

// Half-open byte range [begin, end) into a raw text.
struct ByteSpan {
  std::size_t begin = 0;
  std::size_t end = 0;

  friend bool operator==(const ByteSpan&, const ByteSpan&) = default;
};

// Half-open token-index range [begin, end).
struct SentenceRange {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  friend bool operator==(const SentenceRange&, const SentenceRange&) = default;
};

struct TokenizedText {
  std::vector<std::string> tokens;
  std::vector<ByteSpan> spans;  // spans[i] locates tokens[i] in the raw text
};

struct TokenizedDocument {
  std::string doc_id;
  std::vector<std::string> tokens;
  std::vector<ByteSpan> spans;
  // Partition of [0, tokens.size()); empty iff there are no tokens.
  std::vector<SentenceRange> sentences;

  std::size_t size() const { return tokens.size(); }
};

// Word-level tokenizer. Tokens are maximal runs of code points that are
// neither Unicode whitespace nor punctuation (general category P*), each
// NFKC-normalized and case-folded. Throws FormatError naming the byte offset
// of the first invalid UTF-8 sequence.
TokenizedText tokenize(std::string_view text);

// Sentence boundaries fall after a token when the raw bytes between it and the
// next token contain '.', '!' or '?' immediately followed by whitespace or the
// end of the text. Abbreviations are not special-cased.
std::vector<SentenceRange> split_sentences(std::string_view text,
                                           const TokenizedText& tokenized);

// tokenize + split_sentences.
TokenizedDocument tokenize_document(std::string doc_id, std::string_view text);

}  // namespace contamkit
