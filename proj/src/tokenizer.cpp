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

#include "contamkit/tokenizer.hpp"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include <array>
#include <cstdint>
#include <string>

#include "contamkit/error.hpp"

namespace contamkit {
namespace {

enum class CharClass : std::uint8_t { kWord, kSpace, kPunct };

CharClass classify(UChar32 c) {
  if (u_isUWhiteSpace(c)) return CharClass::kSpace;
  if (u_ispunct(c)) return CharClass::kPunct;
  return CharClass::kWord;
}

const std::array<CharClass, 128>& ascii_classes() {
  static const std::array<CharClass, 128> table = [] {
    std::array<CharClass, 128> t{};
    for (int c = 0; c < 128; ++c) t[c] = classify(c);
    return t;
  }();
  return table;
}

const icu::Normalizer2& nfkc_casefold() {
  static const icu::Normalizer2* instance = [] {
    UErrorCode status = U_ZERO_ERROR;
    const icu::Normalizer2* n = icu::Normalizer2::getNFKCCasefoldInstance(status);
    if (U_FAILURE(status) || n == nullptr) {
      throw std::runtime_error("ICU NFKC_Casefold normalizer unavailable");
    }
    return n;
  }();
  return *instance;
}

std::string normalize_token(std::string_view raw, bool ascii) {
  if (ascii) {
    std::string out(raw);
    for (char& ch : out) {
      if (ch >= 'A' && ch <= 'Z') ch = static_cast<char>(ch - 'A' + 'a');
    }
    return out;
  }
  UErrorCode status = U_ZERO_ERROR;
  icu::UnicodeString src = icu::UnicodeString::fromUTF8(
      icu::StringPiece(raw.data(), static_cast<int32_t>(raw.size())));
  icu::UnicodeString dst = nfkc_casefold().normalize(src, status);
  if (U_FAILURE(status)) {
    throw FormatError("unicode normalization failed");
  }
  std::string out;
  dst.toUTF8String(out);
  return out;
}

bool is_terminator(char c) { return c == '.' || c == '!' || c == '?'; }

bool is_ascii_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

// True if position `pos` of `text` starts whitespace or is the end of text.
bool space_or_end_at(std::string_view text, std::size_t pos) {
  if (pos >= text.size()) return true;
  auto c = static_cast<unsigned char>(text[pos]);
  if (c < 0x80) return is_ascii_space(static_cast<char>(c));
  UChar32 cp;
  int32_t i = static_cast<int32_t>(pos);
  U8_NEXT(text.data(), i, static_cast<int32_t>(text.size()), cp);
  return cp >= 0 && u_isUWhiteSpace(cp);
}

}  // namespace

TokenizedText tokenize(std::string_view text) {
  TokenizedText out;
  const auto& ascii = ascii_classes();
  const auto length = static_cast<int32_t>(text.size());

  int32_t pos = 0;
  int32_t token_begin = -1;
  bool token_ascii = true;

  auto close_token = [&](int32_t end) {
    if (token_begin < 0) return;
    std::string_view raw = text.substr(token_begin, end - token_begin);
    std::string norm = normalize_token(raw, token_ascii);
    // Case folding can erase default-ignorable code points entirely.
    if (!norm.empty()) {
      out.tokens.push_back(std::move(norm));
      out.spans.push_back({static_cast<std::size_t>(token_begin),
                           static_cast<std::size_t>(end)});
    }
    token_begin = -1;
    token_ascii = true;
  };

  while (pos < length) {
    const int32_t start = pos;
    auto byte = static_cast<unsigned char>(text[pos]);
    CharClass cls;
    bool is_ascii = byte < 0x80;
    if (is_ascii) {
      cls = ascii[byte];
      ++pos;
    } else {
      UChar32 cp;
      U8_NEXT(text.data(), pos, length, cp);
      if (cp < 0) {
        throw FormatError("invalid UTF-8 at byte offset " +
                          std::to_string(start));
      }
      cls = classify(cp);
    }
    if (cls == CharClass::kWord) {
      if (token_begin < 0) token_begin = start;
      token_ascii = token_ascii && is_ascii;
    } else {
      close_token(start);
    }
  }
  close_token(length);
  return out;
}

std::vector<SentenceRange> split_sentences(std::string_view text,
                                           const TokenizedText& tokenized) {
  std::vector<SentenceRange> sentences;
  const std::size_t count = tokenized.tokens.size();
  if (count == 0) return sentences;

  std::size_t begin = 0;
  for (std::size_t i = 0; i + 1 < count; ++i) {
    const std::size_t gap_begin = tokenized.spans[i].end;
    const std::size_t gap_end = tokenized.spans[i + 1].begin;
    bool boundary = false;
    for (std::size_t p = gap_begin; p < gap_end && !boundary; ++p) {
      boundary = is_terminator(text[p]) && space_or_end_at(text, p + 1);
    }
    if (boundary) {
      sentences.push_back({begin, i + 1});
      begin = i + 1;
    }
  }
  sentences.push_back({begin, count});
  return sentences;
}

TokenizedDocument tokenize_document(std::string doc_id, std::string_view text) {
  TokenizedText tokenized = tokenize(text);
  TokenizedDocument doc;
  doc.doc_id = std::move(doc_id);
  doc.sentences = split_sentences(text, tokenized);
  doc.tokens = std::move(tokenized.tokens);
  doc.spans = std::move(tokenized.spans);
  return doc;
}

}  // namespace contamkit
