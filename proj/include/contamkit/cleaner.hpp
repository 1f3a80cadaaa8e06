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

#include "contamkit/corpus_io.hpp"
#include "contamkit/definitions.hpp"
#include "contamkit/ngram_index.hpp"
#include "contamkit/scan.hpp"

namespace contamkit {

struct RemovalReport {
  DefinitionParams definition;
  std::size_t docs_total = 0;
  std::size_t docs_removed = 0;
  std::size_t tokens_total = 0;    // normalized tokens, not bytes
  std::size_t tokens_removed = 0;

  double doc_ratio() const {
    return docs_total == 0 ? 0.0 : static_cast<double>(docs_removed) / docs_total;
  }
  double token_ratio() const {
    return tokens_total == 0 ? 0.0
                             : static_cast<double>(tokens_removed) / tokens_total;
  }
};

// Drops every document judged contaminated under `params`; whole documents
// only, order preserved. Clean documents go to `clean_out`. If `removed` is
// set it is called for every dropped document with its verdict.
RemovalReport filter_corpus(DocumentStream& corpus, const NGramIndex& eval_index,
                            const DefinitionParams& params,
                            const DocumentSink& clean_out,
                            const ScanOptions& options = {},
                            const VerdictCallback& removed = {});

std::string removal_report_json(const RemovalReport& report);

}  // namespace contamkit
