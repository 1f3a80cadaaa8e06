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

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "contamkit/corpus_io.hpp"
#include "oracle.hpp"

namespace contamkit::testing {

inline std::vector<Document> to_documents(const std::vector<oracle::Doc>& docs) {
  std::vector<Document> out;
  for (const auto& d : docs) out.push_back({d.id, d.text(), ""});
  return out;
}

inline std::vector<EvalSample> to_samples(const std::vector<oracle::Sample>& samples,
                                          const std::string& dataset = "toy") {
  std::vector<EvalSample> out;
  for (const auto& s : samples) {
    EvalSample e;
    e.id = s.id;
    e.dataset = dataset;
    e.input_text = s.text();
    e.answer = "yes";
    if (!s.choices.empty()) {
      std::vector<std::string> choices;
      for (const auto& c : s.choices) {
        std::string t;
        for (std::size_t i = 0; i < c.size(); ++i) t += (i ? " " : "") + c[i];
        choices.push_back(t);
      }
      e.choices = choices;
    }
    out.push_back(std::move(e));
  }
  return out;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream out(p, std::ios::binary);
  out << content;
}

// Fresh scratch directory under the system temp dir, removed on destruction.
class ScratchDir {
 public:
  explicit ScratchDir(const std::string& name)
      : path_(std::filesystem::temp_directory_path() /
              ("contamkit_" + name + "_" + std::to_string(::getpid()))) {
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~ScratchDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  std::filesystem::path operator/(const std::string& f) const { return path_ / f; }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace contamkit::testing
