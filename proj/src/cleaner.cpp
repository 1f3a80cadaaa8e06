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

#include "contamkit/cleaner.hpp"

#include "contamkit/reporter.hpp"
#include "json.hpp"

namespace contamkit {

RemovalReport filter_corpus(DocumentStream& corpus, const NGramIndex& eval_index,
                            const DefinitionParams& params,
                            const DocumentSink& clean_out,
                            const ScanOptions& options,
                            const VerdictCallback& removed) {
  RemovalReport report{params};
  scan_corpus(corpus, eval_index, params, options,
              [&](Document& doc, DocumentVerdict& verdict) {
                ++report.docs_total;
                report.tokens_total += verdict.token_count;
                if (verdict.contaminated) {
                  ++report.docs_removed;
                  report.tokens_removed += verdict.token_count;
                  if (removed) removed(doc, verdict);
                } else {
                  clean_out(doc);
                }
              });
  return report;
}

std::string removal_report_json(const RemovalReport& report) {
  nlohmann::ordered_json obj;
  obj["definition"] = definition_name(report.definition);
  obj["params"] = params_json(report.definition);
  obj["docs_total"] = report.docs_total;
  obj["docs_removed"] = report.docs_removed;
  obj["tokens_total"] = report.tokens_total;
  obj["tokens_removed"] = report.tokens_removed;
  obj["doc_ratio"] = report.doc_ratio();
  obj["token_ratio"] = report.token_ratio();
  return obj.dump(2);
}

}  // namespace contamkit
