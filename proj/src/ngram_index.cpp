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

#include "contamkit/ngram_index.hpp"

#include <algorithm>
#include <array>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "contamkit/error.hpp"
#include "contamkit/tokenizer.hpp"

namespace contamkit {
namespace {

constexpr std::array<char, 8> kMagic = {'C', 'K', 'N', 'G', 'I', 'D', 'X', '\0'};

template <typename T>
void put_le(std::ostream& out, T value) {
  std::array<char, sizeof(T)> bytes;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    bytes[i] = static_cast<char>((static_cast<std::uint64_t>(value) >> (8 * i)) & 0xff);
  }
  out.write(bytes.data(), bytes.size());
}

template <typename T>
T get_le(std::istream& in) {
  std::array<unsigned char, sizeof(T)> bytes;
  in.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
  if (in.gcount() != static_cast<std::streamsize>(bytes.size())) {
    throw FormatError("index file truncated");
  }
  std::uint64_t value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    value |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  }
  return static_cast<T>(value);
}

}  // namespace

const char* to_string(IndexSource source) {
  return source == IndexSource::kEvalSide ? "eval" : "corpus";
}

bool NGramIndex::contains(NGramFingerprint fp) const {
  return std::binary_search(fingerprints_.begin(), fingerprints_.end(), fp);
}

bool NGramIndex::contains(NGramFingerprint fp,
                          std::span<const std::string> window) const {
  if (!contains(fp)) return false;
  if (!verify_) return true;
  auto it = store_.find(fp.value);
  if (it == store_.end()) return false;
  for (const auto& seq : it->second) {
    if (std::equal(seq.begin(), seq.end(), window.begin(), window.end())) {
      return true;
    }
  }
  return false;
}

bool NGramIndex::contains(std::span<const std::string> window) const {
  if (window.size() != n_) {
    throw ParameterError("query window has " + std::to_string(window.size()) +
                         " tokens, index n = " + std::to_string(n_));
  }
  return contains(fingerprint(window, seed_), window);
}

NGramIndexBuilder::NGramIndexBuilder(std::size_t n, std::uint64_t seed,
                                     IndexSource source, bool verify) {
  if (n == 0) throw ParameterError("n-gram length must be >= 1");
  index_.n_ = n;
  index_.seed_ = seed;
  index_.source_ = source;
  index_.verify_ = verify;
}

void NGramIndexBuilder::add(std::span<const std::string> tokens) {
  auto fps = extract_ngrams(tokens, index_.n_, index_.seed_);
  index_.fingerprints_.insert(index_.fingerprints_.end(), fps.begin(), fps.end());
  if (!index_.verify_) return;
  for (std::size_t i = 0; i < fps.size(); ++i) {
    auto window = tokens.subspan(i, index_.n_);
    auto& bucket = index_.store_[fps[i].value];
    bool present = std::any_of(bucket.begin(), bucket.end(), [&](const auto& s) {
      return std::equal(s.begin(), s.end(), window.begin(), window.end());
    });
    if (!present) bucket.emplace_back(window.begin(), window.end());
  }
}

NGramIndex NGramIndexBuilder::build() && {
  auto& fps = index_.fingerprints_;
  std::sort(fps.begin(), fps.end());
  fps.erase(std::unique(fps.begin(), fps.end()), fps.end());
  fps.shrink_to_fit();
  return std::move(index_);
}

NGramIndex build_index(std::span<const TokenSequence> sequences, std::size_t n,
                       std::uint64_t seed, IndexSource source, bool verify) {
  NGramIndexBuilder builder(n, seed, source, verify);
  for (const auto& seq : sequences) builder.add(seq);
  return std::move(builder).build();
}

std::vector<TokenSequence> eval_field_tokens(const EvalSample& sample,
                                             EvalFields fields) {
  std::vector<TokenSequence> out;
  out.push_back(tokenize(sample.input_text).tokens);
  if (sample.choices) {
    for (const auto& choice : *sample.choices) {
      out.push_back(tokenize(choice).tokens);
    }
  }
  if (fields == EvalFields::kAll) {
    if (sample.prompt) out.push_back(tokenize(*sample.prompt).tokens);
    if (sample.answer) out.push_back(tokenize(*sample.answer).tokens);
  }
  return out;
}

NGramIndex build_eval_index(std::span<const EvalSample> samples, std::size_t n,
                            std::uint64_t seed, EvalFields fields, bool verify) {
  NGramIndexBuilder builder(n, seed, IndexSource::kEvalSide, verify);
  for (const auto& sample : samples) {
    for (const auto& field : eval_field_tokens(sample, fields)) builder.add(field);
  }
  return std::move(builder).build();
}

NGramIndex build_corpus_index(DocumentStream& corpus, std::size_t n,
                              std::uint64_t seed, bool verify) {
  NGramIndexBuilder builder(n, seed, IndexSource::kCorpusSide, verify);
  while (auto doc = corpus.next()) builder.add(tokenize(doc->text).tokens);
  return std::move(builder).build();
}

void write_index(const NGramIndex& index, std::ostream& out) {
  out.write(kMagic.data(), kMagic.size());
  put_le<std::uint32_t>(out, NGramIndex::kFormatVersion);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(index.n()));
  put_le<std::uint64_t>(out, index.seed());
  put_le<std::uint8_t>(out, static_cast<std::uint8_t>(index.source()));
  put_le<std::uint8_t>(out, index.has_verify_store() ? 1 : 0);
  put_le<std::uint16_t>(out, 0);
  put_le<std::uint64_t>(out, index.entry_count());
  for (auto fp : index.fingerprints()) put_le<std::uint64_t>(out, fp.value);
  if (!index.has_verify_store()) return;

  // Records in fingerprint order so the file is a function of content only.
  std::vector<std::uint64_t> keys;
  keys.reserve(index.verify_store().size());
  for (const auto& [key, _] : index.verify_store()) keys.push_back(key);
  std::sort(keys.begin(), keys.end());
  put_le<std::uint64_t>(out, keys.size());
  for (auto key : keys) {
    auto seqs = index.verify_store().at(key);
    std::sort(seqs.begin(), seqs.end());
    put_le<std::uint64_t>(out, key);
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(seqs.size()));
    for (const auto& seq : seqs) {
      for (const auto& tok : seq) {
        put_le<std::uint32_t>(out, static_cast<std::uint32_t>(tok.size()));
        out.write(tok.data(), static_cast<std::streamsize>(tok.size()));
      }
    }
  }
}

NGramIndex read_index(std::istream& in) {
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (in.gcount() != static_cast<std::streamsize>(magic.size())) {
    throw FormatError("index file truncated");
  }
  if (magic != kMagic) throw FormatError("not an n-gram index file (bad magic)");
  auto version = get_le<std::uint32_t>(in);
  if (version != NGramIndex::kFormatVersion) {
    throw FormatError("unsupported index format version " +
                      std::to_string(version));
  }
  NGramIndex index;
  index.n_ = get_le<std::uint32_t>(in);
  if (index.n_ == 0) throw FormatError("index header has n = 0");
  index.seed_ = get_le<std::uint64_t>(in);
  auto source = get_le<std::uint8_t>(in);
  if (source > 1) throw FormatError("index header has unknown source tag");
  index.source_ = static_cast<IndexSource>(source);
  auto verify = get_le<std::uint8_t>(in);
  if (verify > 1) throw FormatError("index header has bad verify flag");
  index.verify_ = verify == 1;
  get_le<std::uint16_t>(in);
  auto count = get_le<std::uint64_t>(in);

  index.fingerprints_.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    index.fingerprints_.push_back({get_le<std::uint64_t>(in)});
  }
  if (!std::is_sorted(index.fingerprints_.begin(), index.fingerprints_.end()) ||
      std::adjacent_find(index.fingerprints_.begin(), index.fingerprints_.end()) !=
          index.fingerprints_.end()) {
    throw FormatError("index fingerprints are not sorted and distinct");
  }

  if (index.verify_) {
    auto records = get_le<std::uint64_t>(in);
    for (std::uint64_t r = 0; r < records; ++r) {
      auto key = get_le<std::uint64_t>(in);
      auto seq_count = get_le<std::uint32_t>(in);
      auto& bucket = index.store_[key];
      for (std::uint32_t s = 0; s < seq_count; ++s) {
        TokenSequence seq;
        for (std::size_t t = 0; t < index.n_; ++t) {
          auto len = get_le<std::uint32_t>(in);
          std::string tok(len, '\0');
          in.read(tok.data(), len);
          if (in.gcount() != static_cast<std::streamsize>(len)) {
            throw FormatError("index file truncated");
          }
          seq.push_back(std::move(tok));
        }
        bucket.push_back(std::move(seq));
      }
    }
  }
  return index;
}

void save_index(const NGramIndex& index, const std::filesystem::path& path) {
  AtomicOutputFile file(path);
  write_index(index, file.stream());
  file.commit();
}

NGramIndex load_index(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return read_index(in);
}

}  // namespace contamkit
