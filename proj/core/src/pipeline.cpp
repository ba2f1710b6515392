// Copyright 2026 The cynsel Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cynsel/pipeline.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <unordered_map>

#include <json.hpp>

#include "cynsel/manifest.hpp"
#include "cynsel/shard.hpp"
#include "cynsel/version.hpp"

namespace fs = std::filesystem;

namespace cynsel {
namespace {

void require_file(const std::string& path, const std::string& role) {
  if (path.empty()) throw InputError("no " + role + " path configured");
  if (!fs::exists(path)) throw InputError(role + " file does not exist: " + path);
}

fs::path ensure_out_dir(const RunConfig& config) {
  const fs::path dir(config.out_dir);
  fs::create_directories(dir);
  return dir;
}

RepModel load_or_build_rep(const RunConfig& config) {
  if (!config.rep_model_path.empty()) {
    require_file(config.rep_model_path, "rep model");
    return RepModel::load(config.rep_model_path);
  }
  require_file(config.rep_corpus_path, "rep corpus");
  CorpusReader reader(config.rep_corpus_path, config.ingest);
  return build_rep_model(reader, config.min_count);
}

void stamp_header(ManifestHeader& header, const RunConfig& config) {
  header.config_hash = config.config_hash();
  header.config_echo = config.echo();
}

std::uint64_t manifest_tokens(const SelectionManifest& manifest) {
  std::uint64_t tokens = 0;
  for (const auto& entry : manifest.entries) tokens += entry.token_count;
  return tokens;
}

void write_text_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write: " + path.string());
  out << content;
  if (!out) throw Error("write failed: " + path.string());
}

}  // namespace

BuildRepOutcome cmd_build_rep(const RunConfig& config) {
  require_file(config.rep_corpus_path, "rep corpus");
  const fs::path dir = ensure_out_dir(config);

  CorpusReader reader(config.rep_corpus_path, config.ingest);
  const RepModel model = build_rep_model(reader, config.min_count);

  BuildRepOutcome outcome;
  outcome.model_path = (dir / "rep.model").string();
  outcome.vocab_size = model.size();
  outcome.total_tokens = model.total();
  model.save(outcome.model_path, config.config_hash());
  return outcome;
}

SelectOutcome cmd_select(const RunConfig& config) {
  require_file(config.corpus_path, "corpus");
  const fs::path dir = ensure_out_dir(config);
  const RepModel rep = load_or_build_rep(config);
  const std::vector<Document> corpus = read_corpus(config.corpus_path, config.ingest);
  if (corpus.empty()) throw InputError("corpus is empty after ingestion filters");

  SelectOutcome outcome;
  outcome.manifest_path = (dir / "manifest.jsonl").string();

  if (config.shards <= 1) {
    SelectionResult result = select_documents(corpus, rep, config.selection_config(),
                                              config.resolved_threads());
    stamp_header(result.manifest.header, config);
    write_manifest(result.manifest, outcome.manifest_path);
    if (config.emit_trace) {
      const fs::path trace = dir / "htrace.txt";
      write_h_trace(result.h_trace, config.config_hash(), trace.string());
      outcome.trace_paths.push_back(trace.string());
    }
    outcome.documents = result.manifest.entries.size();
    outcome.tokens = manifest_tokens(result.manifest);
    outcome.final_entropy = result.h_trace.back();
    outcome.warnings = std::move(result.warnings);
    return outcome;
  }

  const ShardPlan plan = plan_shards(corpus.size(), config.shards, config.k);
  ShardedResult result = run_sharded(corpus, rep, config.selection_config(), plan,
                                     config.resolved_threads());
  for (std::uint32_t s = 0; s < plan.num_shards; ++s) {
    stamp_header(result.per_shard[s].header, config);
    const fs::path shard_path = dir / shard_manifest_filename(s);
    write_manifest(result.per_shard[s], shard_path.string());
    outcome.shard_manifest_paths.push_back(shard_path.string());
    if (config.emit_trace) {
      char name[40];
      std::snprintf(name, sizeof(name), "htrace-shard-%04u.txt", s);
      const fs::path trace = dir / name;
      write_h_trace(result.per_shard_traces[s], config.config_hash(), trace.string());
      outcome.trace_paths.push_back(trace.string());
    }
  }
  stamp_header(result.merged.header, config);
  result.merged.header.shards = plan.num_shards;
  write_manifest(result.merged, outcome.manifest_path);
  outcome.documents = result.merged.entries.size();
  outcome.tokens = manifest_tokens(result.merged);
  outcome.warnings = std::move(result.warnings);
  return outcome;
}

SelectOutcome cmd_random_select(const RunConfig& config) {
  require_file(config.corpus_path, "corpus");
  const fs::path dir = ensure_out_dir(config);
  const std::vector<Document> corpus = read_corpus(config.corpus_path, config.ingest);
  if (corpus.empty()) throw InputError("corpus is empty after ingestion filters");

  const SelectionBudget budget = config.token_budget > 0
                                     ? SelectionBudget::from_tokens(config.token_budget)
                                     : SelectionBudget::from_fraction(config.k);
  SelectionResult result = random_select(corpus, budget, config.seed);
  stamp_header(result.manifest.header, config);

  SelectOutcome outcome;
  outcome.manifest_path = (dir / "random-manifest.jsonl").string();
  write_manifest(result.manifest, outcome.manifest_path);
  outcome.documents = result.manifest.entries.size();
  outcome.tokens = manifest_tokens(result.manifest);
  outcome.warnings = std::move(result.warnings);
  return outcome;
}

EvalOutcome cmd_eval(const RunConfig& config) {
  require_file(config.manifest_path, "manifest");
  require_file(config.corpus_path, "corpus");
  require_file(config.target_path, "target corpus");
  const fs::path dir = ensure_out_dir(config);

  const SelectionManifest manifest = read_manifest_file(config.manifest_path);
  if (manifest.entries.empty()) throw InputError("manifest selects no documents");
  const std::vector<Document> corpus = read_corpus(config.corpus_path, config.ingest);

  EvalOutcome outcome;
  outcome.report.domain_fractions = domain_distribution(manifest);
  outcome.report.size = size_stats(manifest, corpus);
  const VocabCounts counts = selected_counts(manifest, corpus);
  CorpusReader target(config.target_path, config.ingest);
  outcome.report.target_ppl = unigram_ppl(counts, target);

  outcome.report_path = (dir / "eval-report.json").string();
  write_text_file(outcome.report_path,
                  eval_report_to_json(outcome.report, kToolVersion, config.config_hash()));
  if (config.emit_tsv) {
    const fs::path tsv = dir / "domain-fractions.tsv";
    write_text_file(tsv, domain_fractions_to_tsv(outcome.report.domain_fractions));
    outcome.tsv_path = tsv.string();
  }
  return outcome;
}

CompareOutcome cmd_compare(const RunConfig& config) {
  require_file(config.corpus_path, "corpus");
  require_file(config.target_path, "target corpus");
  const fs::path dir = ensure_out_dir(config);
  const RepModel rep = load_or_build_rep(config);
  const std::vector<Document> corpus = read_corpus(config.corpus_path, config.ingest);
  if (corpus.empty()) throw InputError("corpus is empty after ingestion filters");
  const std::vector<Document> target = read_corpus(config.target_path, config.ingest);

  const unsigned threads = config.resolved_threads();

  // Document-level selection at the configured budget sets the token size
  // the other two arms are matched to.
  SelectionResult doc_run =
      select_documents(corpus, rep, config.selection_config(), threads);
  VocabCounts doc_counts;
  std::uint64_t doc_tokens = 0;
  {
    std::vector<Document> picked;
    std::unordered_map<std::uint64_t, const Document*> by_id;
    for (const auto& d : corpus) by_id.emplace(d.doc_id, &d);
    for (const auto& entry : doc_run.manifest.entries) {
      doc_counts.add(*by_id.at(entry.doc_id));
      doc_tokens += entry.token_count;
    }
  }
  if (doc_tokens == 0) throw Error("document selection picked no tokens");

  // Sentence-level arm at the same token size.
  std::vector<Sentence> sentences;
  for (const auto& doc : corpus) {
    sentences.insert(sentences.end(), doc.sentences.begin(), doc.sentences.end());
  }
  SelectionConfig sent_config;
  sent_config.budget = SelectionBudget::from_tokens(doc_tokens);
  sent_config.mode = config.mode;
  const SentenceSelectionResult sent_run =
      select_sentences(sentences, rep, sent_config, threads);
  VocabCounts sent_counts;
  std::uint64_t sent_tokens = 0;
  for (const auto& pick : sent_run.picks) {
    sent_counts.add(sentences[pick.sentence_index]);
    sent_tokens += pick.token_count;
  }

  // Random-document arm at the same token size.
  const SelectionResult rand_run =
      random_select(corpus, SelectionBudget::from_tokens(doc_tokens), config.seed);
  VocabCounts rand_counts;
  std::uint64_t rand_tokens = 0;
  {
    std::unordered_map<std::uint64_t, const Document*> by_id;
    for (const auto& d : corpus) by_id.emplace(d.doc_id, &d);
    for (const auto& entry : rand_run.manifest.entries) {
      rand_counts.add(*by_id.at(entry.doc_id));
      rand_tokens += entry.token_count;
    }
  }

  CompareOutcome outcome;
  outcome.rows.push_back({"cynical_doc", doc_run.manifest.entries.size(), doc_tokens,
                          unigram_ppl(doc_counts, target)});
  outcome.rows.push_back({"cynical_sent", sent_run.picks.size(), sent_tokens,
                          unigram_ppl(sent_counts, target)});
  outcome.rows.push_back({"random_doc", rand_run.manifest.entries.size(), rand_tokens,
                          unigram_ppl(rand_counts, target)});

  nlohmann::json j;
  j["type"] = "cynsel_compare_report";
  j["tool_version"] = kToolVersion;
  j["config_hash"] = config.config_hash();
  j["ppl_metric"] = "unigram_proxy";
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : outcome.rows) {
    nlohmann::json r;
    r["name"] = row.name;
    r["units"] = row.units;
    r["tokens"] = row.tokens;
    r["target_ppl"] = row.target_ppl;
    rows.push_back(r);
  }
  j["rows"] = rows;
  outcome.report_path = (dir / "compare.json").string();
  write_text_file(outcome.report_path, j.dump(2) + "\n");
  return outcome;
}

}  // namespace cynsel
