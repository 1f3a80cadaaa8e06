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

#include "contamkit/scan.hpp"

#include "contamkit/error.hpp"
#include "contamkit/tokenizer.hpp"
#include "parallel.hpp"

namespace contamkit {

void scan_corpus(DocumentStream& corpus, const NGramIndex& eval_index,
                 const DefinitionParams& params, const ScanOptions& options,
                 const VerdictCallback& on_verdict) {
  validate(params);
  if (eval_index.source() != IndexSource::kEvalSide ||
      eval_index.n() != gram_length(params)) {
    throw ConfigError(std::string("scanning a corpus with ") +
                      definition_name(params) + " at gram length " +
                      std::to_string(gram_length(params)) +
                      " needs an eval-side index of that length; got a " +
                      to_string(eval_index.source()) + "-side index with n = " +
                      std::to_string(eval_index.n()));
  }
  const std::size_t batch_size = options.batch_size == 0 ? 1 : options.batch_size;
  std::vector<Document> batch;
  batch.reserve(batch_size);
  bool done = false;
  while (!done) {
    batch.clear();
    while (batch.size() < batch_size) {
      auto doc = corpus.next();
      if (!doc) {
        done = true;
        break;
      }
      batch.push_back(std::move(*doc));
    }
    if (batch.empty()) break;
    auto verdicts = internal::parallel_map<DocumentVerdict>(
        batch.size(), options.workers, [&](std::size_t i) {
          auto tokenized = tokenize_document(batch[i].id, batch[i].text);
          return judge_document(tokenized, eval_index, params);
        });
    for (std::size_t i = 0; i < batch.size(); ++i) on_verdict(batch[i], verdicts[i]);
  }
}

}  // namespace contamkit
