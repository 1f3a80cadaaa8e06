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

#include <atomic>
#include <system_error>
#include <unordered_set>

#include <unistd.h>

#include "contamkit/error.hpp"
#include "json.hpp"

namespace contamkit {

using nlohmann::json;

namespace {

json parse_object(const std::string& line, std::size_t line_number) {
  json obj;
  try {
    obj = json::parse(line);
  } catch (const json::parse_error& e) {
    throw FormatError("line " + std::to_string(line_number) +
                      ": malformed JSON: " + e.what());
  }
  if (!obj.is_object()) {
    throw FormatError("line " + std::to_string(line_number) +
                      ": expected a JSON object");
  }
  return obj;
}

std::string required_string(const json& obj, const char* key,
                            std::size_t line_number) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) {
    throw FormatError("line " + std::to_string(line_number) +
                      ": missing string field \"" + key + "\"");
  }
  return it->get<std::string>();
}

std::optional<std::string> optional_string(const json& obj, const char* key,
                                           std::size_t line_number) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) {
    throw FormatError("line " + std::to_string(line_number) + ": field \"" +
                      key + "\" must be a string");
  }
  return it->get<std::string>();
}

bool read_line(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

bool is_blank(const std::string& line) {
  return line.find_first_not_of(" \t") == std::string::npos;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return in;
}

}  // namespace

Document parse_document_line(const std::string& line, std::size_t line_number) {
  json obj = parse_object(line, line_number);
  Document doc;
  doc.id = required_string(obj, "id", line_number);
  if (doc.id.empty()) {
    throw FormatError("line " + std::to_string(line_number) +
                      ": empty document id");
  }
  doc.text = required_string(obj, "text", line_number);
  doc.raw_line = line;
  return doc;
}

std::string serialize_document(const Document& doc) {
  if (!doc.raw_line.empty()) return doc.raw_line;
  json obj = {{"id", doc.id}, {"text", doc.text}};
  return obj.dump();
}

CorpusReader::CorpusReader(const std::filesystem::path& path)
    : path_(path), in_(open_input(path)) {}

std::optional<Document> CorpusReader::next() {
  std::string line;
  while (read_line(in_, line)) {
    ++line_number_;
    if (is_blank(line)) continue;
    return parse_document_line(line, line_number_);
  }
  if (in_.bad()) throw IoError("read failure on " + path_.string());
  return std::nullopt;
}

std::vector<Document> read_corpus(const std::filesystem::path& path) {
  CorpusReader reader(path);
  std::vector<Document> docs;
  while (auto doc = reader.next()) docs.push_back(std::move(*doc));
  return docs;
}

std::size_t count_documents(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  std::string line;
  std::size_t count = 0;
  while (read_line(in, line)) {
    if (!is_blank(line)) ++count;
  }
  return count;
}

EvalSample parse_eval_line(const std::string& line, std::size_t line_number) {
  json obj = parse_object(line, line_number);
  EvalSample sample;
  sample.id = required_string(obj, "id", line_number);
  if (sample.id.empty()) {
    throw FormatError("line " + std::to_string(line_number) +
                      ": empty sample id");
  }
  sample.dataset = required_string(obj, "dataset", line_number);
  sample.input_text = required_string(obj, "text", line_number);
  if (sample.input_text.empty()) {
    throw FormatError("line " + std::to_string(line_number) +
                      ": empty sample text");
  }
  sample.prompt = optional_string(obj, "prompt", line_number);
  sample.answer = optional_string(obj, "answer", line_number);
  if (auto it = obj.find("choices"); it != obj.end() && !it->is_null()) {
    if (!it->is_array()) {
      throw FormatError("line " + std::to_string(line_number) +
                        ": field \"choices\" must be an array of strings");
    }
    std::vector<std::string> choices;
    for (const auto& c : *it) {
      if (!c.is_string()) {
        throw FormatError("line " + std::to_string(line_number) +
                          ": field \"choices\" must be an array of strings");
      }
      choices.push_back(c.get<std::string>());
    }
    sample.choices = std::move(choices);
  }
  return sample;
}

std::string serialize_eval_sample(const EvalSample& sample) {
  json obj = {{"id", sample.id},
              {"dataset", sample.dataset},
              {"text", sample.input_text}};
  if (sample.prompt) obj["prompt"] = *sample.prompt;
  if (sample.answer) obj["answer"] = *sample.answer;
  if (sample.choices) obj["choices"] = *sample.choices;
  return obj.dump();
}

std::vector<EvalSample> read_eval(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  std::vector<EvalSample> samples;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_number = 0;
  while (read_line(in, line)) {
    ++line_number;
    if (is_blank(line)) continue;
    EvalSample sample = parse_eval_line(line, line_number);
    if (!seen.insert(sample.id).second) {
      throw FormatError("line " + std::to_string(line_number) +
                        ": duplicate sample id \"" + sample.id + "\"");
    }
    samples.push_back(std::move(sample));
  }
  return samples;
}

AtomicOutputFile::AtomicOutputFile(std::filesystem::path path)
    : path_(std::move(path)) {
  static std::atomic<unsigned> counter{0};
  tmp_path_ = path_;
  tmp_path_ += ".tmp-" + std::to_string(::getpid()) + "-" +
               std::to_string(counter++);
  out_.open(tmp_path_, std::ios::binary | std::ios::trunc);
  if (!out_) throw IoError("cannot write " + path_.string());
}

AtomicOutputFile::~AtomicOutputFile() {
  if (!committed_) {
    out_.close();
    std::error_code ec;
    std::filesystem::remove(tmp_path_, ec);
  }
}

void AtomicOutputFile::commit() {
  out_.flush();
  if (!out_) throw IoError("write failure on " + path_.string());
  out_.close();
  std::error_code ec;
  std::filesystem::rename(tmp_path_, path_, ec);
  if (ec) throw IoError("cannot rename onto " + path_.string() + ": " + ec.message());
  committed_ = true;
}

void CorpusWriter::write(const Document& doc) {
  out_ << serialize_document(doc) << '\n';
  ++written_;
}

void write_corpus(DocumentStream& docs, const std::filesystem::path& path) {
  AtomicOutputFile file(path);
  CorpusWriter writer(file.stream());
  while (auto doc = docs.next()) writer.write(*doc);
  file.commit();
}

void write_corpus(const std::vector<Document>& docs,
                  const std::filesystem::path& path) {
  VectorDocumentStream stream(docs);
  write_corpus(stream, path);
}

}  // namespace contamkit
