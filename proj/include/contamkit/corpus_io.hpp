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
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace contamkit {

struct Document {
  std::string id;
  std::string text;
  // The JSON line this document was read from, if any. Writers emit it
  // verbatim so unknown keys and the original escaping survive a pass
  // through the toolkit. Must be cleared if id or text are modified.
  std::string raw_line;

  friend bool operator==(const Document& a, const Document& b) {
    return a.id == b.id && a.text == b.text;
  }
};

struct EvalSample {
  std::string id;
  std::string dataset;
  std::string input_text;
  std::optional<std::string> prompt;
  std::optional<std::string> answer;
  std::optional<std::vector<std::string>> choices;

  friend bool operator==(const EvalSample&, const EvalSample&) = default;
};

// Pull-style document stream.
class DocumentStream {
 public:
  virtual ~DocumentStream() = default;
  virtual std::optional<Document> next() = 0;
};

using DocumentSink = std::function<void(const Document&)>;

// Streams {"id", "text"} records from a JSONL file. Blank lines are skipped;
// unknown keys are ignored. Parse failures raise FormatError naming the line.
class CorpusReader : public DocumentStream {
 public:
  explicit CorpusReader(const std::filesystem::path& path);

  std::optional<Document> next() override;
  std::size_t line_number() const { return line_number_; }

 private:
  std::filesystem::path path_;
  std::ifstream in_;
  std::size_t line_number_ = 0;
};

class VectorDocumentStream : public DocumentStream {
 public:
  explicit VectorDocumentStream(std::vector<Document> docs)
      : docs_(std::move(docs)) {}

  std::optional<Document> next() override {
    if (pos_ >= docs_.size()) return std::nullopt;
    return docs_[pos_++];
  }

 private:
  std::vector<Document> docs_;
  std::size_t pos_ = 0;
};

std::vector<Document> read_corpus(const std::filesystem::path& path);
std::size_t count_documents(const std::filesystem::path& path);

Document parse_document_line(const std::string& line, std::size_t line_number);
std::string serialize_document(const Document& doc);

std::vector<EvalSample> read_eval(const std::filesystem::path& path);
EvalSample parse_eval_line(const std::string& line, std::size_t line_number);
std::string serialize_eval_sample(const EvalSample& sample);

// Writes to `path + ".tmp-<unique>"` and renames onto `path` on commit().
// An uncommitted file is removed on destruction, so failed runs leave no
// partial outputs behind.
class AtomicOutputFile {
 public:
  explicit AtomicOutputFile(std::filesystem::path path);
  ~AtomicOutputFile();

  AtomicOutputFile(const AtomicOutputFile&) = delete;
  AtomicOutputFile& operator=(const AtomicOutputFile&) = delete;

  std::ostream& stream() { return out_; }
  const std::filesystem::path& path() const { return path_; }
  void commit();

 private:
  std::filesystem::path path_;
  std::filesystem::path tmp_path_;
  std::ofstream out_;
  bool committed_ = false;
};

// Line-oriented corpus writer; preserves the order of write() calls.
class CorpusWriter {
 public:
  explicit CorpusWriter(std::ostream& out) : out_(out) {}

  void write(const Document& doc);
  std::size_t written() const { return written_; }

 private:
  std::ostream& out_;
  std::size_t written_ = 0;
};

void write_corpus(DocumentStream& docs, const std::filesystem::path& path);
void write_corpus(const std::vector<Document>& docs,
                  const std::filesystem::path& path);

}  // namespace contamkit
