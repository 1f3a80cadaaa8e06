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

// contamkit: build n-gram indexes, scan/filter corpora for evaluation-data
// contamination, inject contamination, bucket eval sets and sweep parameters.

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "contamkit/cleaner.hpp"
#include "contamkit/corpus_io.hpp"
#include "contamkit/definitions.hpp"
#include "contamkit/error.hpp"
#include "contamkit/injector.hpp"
#include "contamkit/ngram_index.hpp"
#include "contamkit/reporter.hpp"
#include "contamkit/scan.hpp"
#include "contamkit/tokenizer.hpp"

namespace fs = std::filesystem;
using namespace contamkit;

namespace {

enum ExitCode : int {
  kOk = 0,
  kUsage = 2,
  kIo = 3,
  kDataFormat = 4,
  kConfigMismatch = 5,
};

struct DefinitionFlags {
  std::string definition = "direct";
  std::size_t n = 8;
  std::size_t min_match_len = 11;
  double lambda = 0.7;
  double lambda_clean = 0.2;
  double lambda_dirty = 0.8;
  bool sentence_level = false;
};

struct Flags {
  std::string corpus, eval, index, out, report, verdicts, removed, manifest,
      templates, csv, out_dir;
  std::string index_fields = "text";
  std::string dataset = "eval";
  std::string mode = "text";
  std::string placement = "shuffle";
  std::string join = "space";
  std::string n_list = "8";
  std::string lambda_list = "0.7";
  std::size_t factor = 1;
  std::uint64_t seed = kDefaultSeed;
  std::size_t workers = 1;
  bool verify_index = false;
  DefinitionFlags def;
};

std::string env_name(const std::string& flag) {
  std::string name = "CONTAMKIT_";
  for (char c : flag) {
    name += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  }
  return name;
}

template <typename T>
CLI::Option* flag_option(CLI::App* app, const std::string& name, T& target,
                         const std::string& help) {
  return app->add_option("--" + name, target, help)
      ->envname(env_name(name))
      ->capture_default_str();
}

void add_definition_flags(CLI::App* app, DefinitionFlags& def) {
  flag_option(app, "definition", def.definition, "direct | palm | llama2");
  flag_option(app, "n", def.n, "gram length for direct/palm");
  flag_option(app, "min-match-len", def.min_match_len,
              "llama2 minimum shared run length L");
  flag_option(app, "lambda", def.lambda, "contamination threshold for palm/llama2");
  app->add_flag("--sentence-level", def.sentence_level,
                "llama2: judge each sentence instead of the whole document")
      ->envname(env_name("sentence-level"));
}

void add_bucket_flags(CLI::App* app, DefinitionFlags& def) {
  flag_option(app, "lambda-clean", def.lambda_clean, "clean/not-clean split");
  flag_option(app, "lambda-dirty", def.lambda_dirty, "not-dirty/dirty split");
}

DefinitionParams make_params(const DefinitionFlags& def) {
  DefinitionParams params;
  switch (parse_family(def.definition)) {
    case DefinitionFamily::kDirect:
      params = DirectOverlapParams{def.n};
      break;
    case DefinitionFamily::kPalm:
      params = PalmParams{def.n, Threshold::from_double(def.lambda)};
      break;
    case DefinitionFamily::kLlama2:
      params = Llama2Params{def.min_match_len, Threshold::from_double(def.lambda),
                            def.sentence_level};
      break;
  }
  validate(params);
  return params;
}

std::pair<Threshold, Threshold> bucket_thresholds(const DefinitionFlags& def) {
  auto clean = Threshold::from_double(def.lambda_clean);
  auto dirty = Threshold::from_double(def.lambda_dirty);
  if (clean > dirty) {
    throw ParameterError("--lambda-clean must not exceed --lambda-dirty");
  }
  return {clean, dirty};
}

EvalFields parse_fields(const std::string& name) {
  if (name == "text") return EvalFields::kTextAndChoices;
  if (name == "all") return EvalFields::kAll;
  throw ParameterError("unknown --index-fields \"" + name + "\" (expected text or all)");
}

void require_input(const std::string& path, const char* flag) {
  if (path.empty()) throw ParameterError(std::string(flag) + " is required");
  if (!fs::exists(path)) throw IoError("no such file: " + path);
}

void require_output(const std::string& path, const char* flag) {
  if (path.empty()) throw ParameterError(std::string(flag) + " is required");
}

std::vector<std::string> split_list(const std::string& list) {
  std::vector<std::string> items;
  std::string cur;
  for (char c : list) {
    if (c == ',') {
      items.push_back(cur);
      cur.clear();
    } else if (c != ' ') {
      cur += c;
    }
  }
  items.push_back(cur);
  return items;
}

std::size_t parse_size(const std::string& s, const char* flag) {
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ParameterError(std::string("bad integer \"") + s + "\" in " + flag);
  }
  return value;
}

// "3,5,8" or "3..13" (inclusive) or a mix.
std::vector<std::size_t> parse_n_list(const std::string& list) {
  std::vector<std::size_t> values;
  for (const auto& item : split_list(list)) {
    auto dots = item.find("..");
    if (dots == std::string::npos) {
      values.push_back(parse_size(item, "--n-list"));
      continue;
    }
    auto lo = parse_size(item.substr(0, dots), "--n-list");
    auto hi = parse_size(item.substr(dots + 2), "--n-list");
    if (lo > hi) throw ParameterError("empty range \"" + item + "\" in --n-list");
    for (auto v = lo; v <= hi; ++v) values.push_back(v);
  }
  for (auto v : values) {
    if (v == 0) throw ParameterError("--n-list values must be >= 1");
  }
  return values;
}

std::vector<Threshold> parse_lambda_list(const std::string& list) {
  std::vector<Threshold> values;
  for (const auto& item : split_list(list)) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (item.empty() || used != item.size()) {
      throw ParameterError("bad number \"" + item + "\" in --lambda-list");
    }
    values.push_back(Threshold::from_double(v));
  }
  return values;
}

std::vector<std::string> read_templates(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::vector<std::string> templates;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") != std::string::npos) templates.push_back(line);
  }
  if (templates.empty()) throw FormatError("no templates in " + path);
  return templates;
}

// ---------------------------------------------------------------------------

int cmd_index(const Flags& f) {
  if (f.eval.empty() == f.corpus.empty()) {
    throw ParameterError("index needs exactly one of --eval or --corpus");
  }
  if (f.def.n == 0) throw ParameterError("--n must be >= 1");
  auto fields = parse_fields(f.index_fields);
  require_output(f.out, "--out");
  NGramIndex index = [&] {
    if (!f.eval.empty()) {
      require_input(f.eval, "--eval");
      auto samples = read_eval(f.eval);
      return build_eval_index(samples, f.def.n, f.seed, fields, f.verify_index);
    }
    require_input(f.corpus, "--corpus");
    CorpusReader reader(f.corpus);
    return build_corpus_index(reader, f.def.n, f.seed, f.verify_index);
  }();
  save_index(index, f.out);
  std::cerr << "indexed " << index.entry_count() << " distinct " << index.n()
            << "-grams (" << to_string(index.source()) << " side)\n";
  return kOk;
}

int scan_eval_side(const Flags& f, const DefinitionParams& params,
                   const NGramIndex& index) {
  require_input(f.eval, "--eval");
  if (index.n() != gram_length(params)) {
    throw ConfigError(std::string(definition_name(params)) + " needs gram length " +
                      std::to_string(gram_length(params)) + ", index has n = " +
                      std::to_string(index.n()));
  }
  auto [clean, dirty] = bucket_thresholds(f.def);
  auto samples = read_eval(f.eval);

  std::unique_ptr<AtomicOutputFile> verdicts_out;
  if (!f.verdicts.empty()) verdicts_out = std::make_unique<AtomicOutputFile>(f.verdicts);
  AtomicOutputFile report_out(f.report);

  std::map<std::string, ScanCounts> per_dataset;
  for (const auto& s : samples) {
    auto tokens = tokenize(s.input_text).tokens;
    bool contaminated = false;
    double fraction = 0.0;
    std::size_t marked = 0;
    std::optional<BucketLabel> bucket;
    if (const auto* l = std::get_if<Llama2Params>(&params)) {
      auto v = llama2_mark_tokens(s.id, tokens, index, l->min_match_len);
      marked = v.marked_count();
      fraction = v.percentage();
      contaminated = !tokens.empty() && l->lambda.reached_by(marked, tokens.size());
      bucket = bucket_assign(v, clean, dirty);
    } else {
      Threshold lambda;  // direct overlap: any hit window (fraction > 0)
      const auto* p = std::get_if<PalmParams>(&params);
      if (p != nullptr) lambda = p->lambda;
      auto v = palm_eval_verdict(s.id, tokens, index, lambda);
      fraction = v.fraction();
      contaminated = p != nullptr ? v.contaminated : v.hit_windows > 0;
      // Tokens covered by hitting windows.
      if (v.hit_windows > 0) {
        auto cover = llama2_mark_tokens(s.id, tokens, index, index.n());
        marked = cover.marked_count();
      }
    }
    DocumentVerdict dv;
    dv.doc_id = s.id;
    dv.contaminated = contaminated;
    dv.fraction = fraction;
    dv.contaminated_token_count = marked;
    dv.token_count = tokens.size();
    per_dataset[s.dataset].add(dv);
    if (verdicts_out) {
      verdicts_out->stream() << verdict_json_line(s.id, contaminated, fraction,
                                                  marked, params, bucket)
                             << '\n';
    }
  }

  ScanReport report{params, "samples", {}};
  for (auto& [name, counts] : per_dataset) report.datasets.push_back({name, counts});
  report_out.stream() << scan_report_json(report) << '\n';
  if (verdicts_out) verdicts_out->commit();
  report_out.commit();
  return kOk;
}

int cmd_scan(const Flags& f) {
  auto params = make_params(f.def);
  require_input(f.index, "--index");
  require_output(f.report, "--report");
  if (f.corpus.empty() == f.eval.empty()) {
    throw ParameterError("scan needs exactly one of --corpus or --eval");
  }
  auto index = load_index(f.index);
  if (!f.eval.empty()) {
    if (index.source() != IndexSource::kCorpusSide) {
      throw ConfigError("scanning --eval needs a corpus-side index");
    }
    return scan_eval_side(f, params, index);
  }
  require_input(f.corpus, "--corpus");
  if (index.source() != IndexSource::kEvalSide) {
    throw ConfigError("scanning --corpus needs an eval-side index");
  }

  std::unique_ptr<AtomicOutputFile> verdicts_out;
  if (!f.verdicts.empty()) verdicts_out = std::make_unique<AtomicOutputFile>(f.verdicts);
  AtomicOutputFile report_out(f.report);

  CorpusReader reader(f.corpus);
  ScanCounts counts;
  scan_corpus(reader, index, params, {f.workers},
              [&](Document&, DocumentVerdict& v) {
                counts.add(v);
                if (verdicts_out) {
                  verdicts_out->stream() << verdict_json_line(v, params) << '\n';
                }
              });
  ScanReport report{params, "documents", {{f.dataset, counts}}};
  report_out.stream() << scan_report_json(report) << '\n';
  if (verdicts_out) verdicts_out->commit();
  report_out.commit();
  std::cerr << counts.docs_contaminated << " of " << counts.docs_scanned
            << " documents contaminated\n";
  return kOk;
}

int cmd_filter(const Flags& f) {
  auto params = make_params(f.def);
  require_input(f.corpus, "--corpus");
  require_input(f.index, "--index");
  require_output(f.out, "--out");
  require_output(f.report, "--report");
  auto index = load_index(f.index);

  AtomicOutputFile corpus_out(f.out);
  AtomicOutputFile report_out(f.report);
  std::unique_ptr<AtomicOutputFile> removed_out;
  if (!f.removed.empty()) removed_out = std::make_unique<AtomicOutputFile>(f.removed);
  CorpusWriter writer(corpus_out.stream());
  std::unique_ptr<CorpusWriter> removed_writer;
  if (removed_out) removed_writer = std::make_unique<CorpusWriter>(removed_out->stream());

  CorpusReader reader(f.corpus);
  VerdictCallback on_removed;
  if (removed_writer) {
    on_removed = [&](Document& d, DocumentVerdict&) { removed_writer->write(d); };
  }
  auto report = filter_corpus(
      reader, index, params, [&](const Document& d) { writer.write(d); },
      {f.workers}, on_removed);
  report_out.stream() << removal_report_json(report) << '\n';
  corpus_out.commit();
  if (removed_out) removed_out->commit();
  report_out.commit();
  std::cerr << "removed " << report.docs_removed << " of " << report.docs_total
            << " documents\n";
  return kOk;
}

int cmd_inject(const Flags& f) {
  InjectionSpec spec;
  spec.mode = parse_mode(f.mode);
  spec.placement = parse_placement(f.placement);
  if (f.join != "space" && f.join != "newline") {
    throw ParameterError("unknown --join \"" + f.join + "\" (expected space or newline)");
  }
  spec.join = f.join == "space" ? JoinStyle::kSpace : JoinStyle::kNewline;
  spec.factor = f.factor;
  spec.seed = f.seed;
  require_input(f.corpus, "--corpus");
  require_input(f.eval, "--eval");
  require_output(f.out, "--out");
  if (!f.templates.empty()) {
    require_input(f.templates, "--templates");
    spec.prompt_templates = read_templates(f.templates);
  }

  auto samples = read_eval(f.eval);
  const std::size_t corpus_size = count_documents(f.corpus);
  AtomicOutputFile corpus_out(f.out);
  std::unique_ptr<AtomicOutputFile> manifest_out;
  if (!f.manifest.empty()) manifest_out = std::make_unique<AtomicOutputFile>(f.manifest);

  CorpusWriter writer(corpus_out.stream());
  CorpusReader reader(f.corpus);
  auto manifest = inject(reader, corpus_size, samples, spec,
                         [&](const Document& d) { writer.write(d); });
  if (manifest_out) {
    for (const auto& r : manifest.records) {
      manifest_out->stream() << manifest_json_line(r) << '\n';
    }
  }
  corpus_out.commit();
  if (manifest_out) manifest_out->commit();
  std::cerr << "wrote " << writer.written() << " documents ("
            << manifest.records.size() << " injected)\n";
  return kOk;
}

int cmd_bucket(const Flags& f) {
  auto [clean, dirty] = bucket_thresholds(f.def);
  require_input(f.eval, "--eval");
  require_input(f.index, "--index");
  require_output(f.out_dir, "--out-dir");
  auto samples = read_eval(f.eval);
  auto index = load_index(f.index);
  if (index.source() != IndexSource::kCorpusSide) {
    throw ConfigError("bucketing needs a corpus-side index");
  }
  auto verdicts = mark_samples(samples, index, index.n());
  auto counts = export_buckets(samples, verdicts, clean, dirty, f.out_dir);
  std::cout << "clean=" << counts.clean << " not_clean=" << counts.not_clean
            << " not_dirty=" << counts.not_dirty << " dirty=" << counts.dirty
            << '\n';
  return kOk;
}

int cmd_sweep(const Flags& f) {
  auto family = parse_family(f.def.definition);
  auto n_values = parse_n_list(f.n_list);
  std::vector<Threshold> lambdas;
  if (family != DefinitionFamily::kDirect) lambdas = parse_lambda_list(f.lambda_list);
  auto fields = parse_fields(f.index_fields);
  require_input(f.corpus, "--corpus");
  require_input(f.eval, "--eval");
  require_output(f.csv, "--csv");

  auto samples = read_eval(f.eval);
  AtomicOutputFile csv_out(f.csv);
  CorpusReader reader(f.corpus);
  SweepOptions options{f.seed, fields, f.def.sentence_level, f.workers};
  auto rows = sweep(reader, samples, family, n_values, lambdas, options);
  csv_out.stream() << sweep_csv(rows);
  csv_out.commit();
  return kOk;
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kParameter: return kUsage;
    case ErrorKind::kIo: return kIo;
    case ErrorKind::kDataFormat: return kDataFormat;
    case ErrorKind::kConfig: return kConfigMismatch;
  }
  return 1;
}

const char* kind_name(int code) {
  switch (code) {
    case kUsage: return "usage";
    case kIo: return "io";
    case kDataFormat: return "data_format";
    case kConfigMismatch: return "config_mismatch";
  }
  return "internal";
}

int fail(int code, std::string message) {
  std::replace(message.begin(), message.end(), '\n', ' ');
  std::cerr << "contamkit: error code=" << code << " kind=" << kind_name(code)
            << ": " << message << std::endl;
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Evaluation-data contamination toolkit for pre-training corpora"};
  app.require_subcommand(1);
  Flags f;

  auto* index = app.add_subcommand("index", "build an n-gram index over an eval set or a corpus");
  flag_option(index, "eval", f.eval, "eval JSONL (eval-side index)");
  flag_option(index, "corpus", f.corpus, "corpus JSONL (corpus-side index)");
  flag_option(index, "n", f.def.n, "gram length");
  flag_option(index, "seed", f.seed, "fingerprint seed");
  flag_option(index, "index-fields", f.index_fields, "eval fields: text | all");
  flag_option(index, "out", f.out, "index file to write");
  index->add_flag("--verify-index", f.verify_index, "store token windows for exact checks")
      ->envname(env_name("verify-index"));

  auto* scan = app.add_subcommand("scan", "judge corpus documents (or eval samples) for contamination");
  flag_option(scan, "corpus", f.corpus, "corpus JSONL, scanned against an eval-side index");
  flag_option(scan, "eval", f.eval, "eval JSONL, scanned against a corpus-side index");
  flag_option(scan, "index", f.index, "index file");
  add_definition_flags(scan, f.def);
  add_bucket_flags(scan, f.def);
  flag_option(scan, "dataset", f.dataset, "dataset label for corpus-side reports");
  flag_option(scan, "report", f.report, "ScanReport JSON");
  flag_option(scan, "verdicts", f.verdicts, "per-document verdict JSONL");
  flag_option(scan, "workers", f.workers, "document-level parallelism");

  auto* filter = app.add_subcommand("filter", "drop contaminated documents from a corpus");
  flag_option(filter, "corpus", f.corpus, "corpus JSONL");
  flag_option(filter, "index", f.index, "eval-side index file");
  add_definition_flags(filter, f.def);
  flag_option(filter, "out", f.out, "cleaned corpus JSONL");
  flag_option(filter, "report", f.report, "RemovalReport JSON");
  flag_option(filter, "removed", f.removed, "optional JSONL of removed documents");
  flag_option(filter, "workers", f.workers, "document-level parallelism");

  auto* inj = app.add_subcommand("inject", "insert eval samples into a corpus k times");
  flag_option(inj, "corpus", f.corpus, "corpus JSONL");
  flag_option(inj, "eval", f.eval, "eval JSONL");
  flag_option(inj, "mode", f.mode, "text | gt");
  flag_option(inj, "factor", f.factor, "contamination factor k");
  flag_option(inj, "seed", f.seed, "placement/template seed");
  flag_option(inj, "templates", f.templates, "prompt templates, one per line");
  flag_option(inj, "placement", f.placement, "shuffle | append");
  flag_option(inj, "join", f.join, "space | newline");
  flag_option(inj, "out", f.out, "contaminated corpus JSONL");
  flag_option(inj, "manifest", f.manifest, "manifest JSONL");

  auto* bucket = app.add_subcommand("bucket", "split an eval set into clean/not-clean/not-dirty/dirty");
  flag_option(bucket, "eval", f.eval, "eval JSONL");
  flag_option(bucket, "index", f.index, "corpus-side index built at L");
  add_bucket_flags(bucket, f.def);
  flag_option(bucket, "out-dir", f.out_dir, "output directory");

  auto* swp = app.add_subcommand("sweep", "contamination ratios over a parameter grid");
  flag_option(swp, "corpus", f.corpus, "corpus JSONL");
  flag_option(swp, "eval", f.eval, "eval JSONL");
  flag_option(swp, "definition", f.def.definition, "direct | palm | llama2");
  flag_option(swp, "n-list", f.n_list, "n (or L) values, e.g. 3..13 or 8,11");
  flag_option(swp, "lambda-list", f.lambda_list, "lambda values, e.g. 0.6,0.7,0.8");
  flag_option(swp, "seed", f.seed, "fingerprint seed");
  flag_option(swp, "index-fields", f.index_fields, "eval fields: text | all");
  flag_option(swp, "workers", f.workers, "document-level parallelism");
  swp->add_flag("--sentence-level", f.def.sentence_level, "llama2 sentence-level")
      ->envname(env_name("sentence-level"));
  flag_option(swp, "csv", f.csv, "CSV output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail(kUsage, e.what());
  }

  try {
    if (f.workers == 0) throw ParameterError("--workers must be >= 1");
    if (*index) return cmd_index(f);
    if (*scan) return cmd_scan(f);
    if (*filter) return cmd_filter(f);
    if (*inj) return cmd_inject(f);
    if (*bucket) return cmd_bucket(f);
    if (*swp) return cmd_sweep(f);
  } catch (const Error& e) {
    return fail(exit_code_for(e.kind()), e.what());
  } catch (const fs::filesystem_error& e) {
    return fail(kIo, e.what());
  } catch (const std::exception& e) {
    return fail(1, e.what());
  }
  return fail(kUsage, "no subcommand");
}
