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
#include <functional>

#include "contamkit/corpus_io.hpp"
#include "contamkit/definitions.hpp"
#include "contamkit/ngram_index.hpp"

namespace contamkit {

struct ScanOptions {
  std::size_t workers = 1;
  std::size_t batch_size = 2048;
};

// Receives each document together with its verdict, in corpus order.
using VerdictCallback = std::function<void(Document&, DocumentVerdict&)>;

// Streams the corpus, tokenizing and judging documents in parallel batches
// against a shared read-only eval-side index. Callbacks run on the calling
// thread in input order, so results are identical at any worker count.
void scan_corpus(DocumentStream& corpus, const NGramIndex& eval_index,
                 const DefinitionParams& params, const ScanOptions& options,
                 const VerdictCallback& on_verdict);

}  // namespace contamkit
