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

#include <charconv>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cynsel/error.hpp"
#include "cynsel/pipeline.hpp"
#include "cynsel/run_config.hpp"
#include "cynsel/version.hpp"

namespace {

using cynsel::RunConfig;

struct Flags {
  std::string config_path;
  std::optional<std::string> out;
  std::optional<std::string> corpus;
  std::optional<std::string> rep_corpus;
  std::optional<std::string> rep_model;
  std::optional<std::string> target;
  std::optional<std::string> manifest;
  std::optional<std::string> mode;
  std::optional<std::string> format;
  std::optional<double> k;
  std::optional<std::uint64_t> shards;
  std::optional<std::uint64_t> threads;
  std::optional<std::uint64_t> token_budget;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> min_count;
  std::optional<std::uint64_t> min_doc_sentences;
  std::vector<std::string> exclude_domains;
  bool emit_tsv = false;
  bool no_trace = false;
};

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

// Shared option set; every subcommand takes the same overrides on top of
// an optional config file.
void add_common_options(CLI::App* cmd, Flags& flags) {
  cmd->add_option("--config", flags.config_path, "run config file (key = value lines)");
  cmd->add_option("--out", flags.out, "output directory");
  cmd->add_option("--corpus", flags.corpus, "general corpus (JSONL or text)");
  cmd->add_option("--rep-corpus", flags.rep_corpus, "representative corpus");
  cmd->add_option("--rep-model", flags.rep_model, "prebuilt rep model file");
  cmd->add_option("--target", flags.target, "target corpus for evaluation");
  cmd->add_option("--manifest", flags.manifest, "selection manifest (eval input)");
  cmd->add_option("--k", flags.k, "document fraction budget in (0,1]");
  cmd->add_option("--token-budget", flags.token_budget, "absolute token budget");
  cmd->add_option("--mode", flags.mode, "selection mode: exact|lazy");
  cmd->add_option("--shards", flags.shards, "number of shards");
  cmd->add_option("--threads", flags.threads, "worker threads (0 = all cores)");
  cmd->add_option("--seed", flags.seed, "rng seed for the random baseline");
  cmd->add_option("--min-count", flags.min_count, "rep model min word count");
  cmd->add_option("--min-doc-sentences", flags.min_doc_sentences,
                  "drop documents with fewer sentences");
  cmd->add_option("--exclude-domain", flags.exclude_domains,
                  "domain tag to skip at ingestion (repeatable)");
  cmd->add_option("--format", flags.format, "corpus format: auto|jsonl|text");
  cmd->add_flag("--emit-tsv", flags.emit_tsv, "also write domain fractions as TSV");
  cmd->add_flag("--no-trace", flags.no_trace, "skip the H-trace file");
}

RunConfig resolve_config(const Flags& flags) {
  RunConfig config;
  if (!flags.config_path.empty()) config = RunConfig::from_file(flags.config_path);
  if (flags.out) config.set("out_dir", *flags.out);
  if (flags.corpus) config.set("corpus", *flags.corpus);
  if (flags.rep_corpus) config.set("rep_corpus", *flags.rep_corpus);
  if (flags.rep_model) config.set("rep_model", *flags.rep_model);
  if (flags.target) config.set("target", *flags.target);
  if (flags.manifest) config.set("manifest", *flags.manifest);
  if (flags.k) config.set("k", format_double(*flags.k));
  if (flags.token_budget) config.set("token_budget", std::to_string(*flags.token_budget));
  if (flags.mode) config.set("mode", *flags.mode);
  if (flags.shards) config.set("shards", std::to_string(*flags.shards));
  if (flags.threads) config.set("threads", std::to_string(*flags.threads));
  if (flags.seed) config.set("seed", std::to_string(*flags.seed));
  if (flags.min_count) config.set("min_count", std::to_string(*flags.min_count));
  if (flags.min_doc_sentences) {
    config.set("min_doc_sentences", std::to_string(*flags.min_doc_sentences));
  }
  for (const auto& domain : flags.exclude_domains) {
    config.ingest.excluded_domains.insert(domain);
  }
  if (flags.format) config.set("format", *flags.format);
  if (flags.emit_tsv) config.set("emit_tsv", "true");
  if (flags.no_trace) config.set("emit_trace", "false");
  return config;
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

int run_build_rep(const RunConfig& config) {
  const auto outcome = cynsel::cmd_build_rep(config);
  std::cout << "rep model: types=" << outcome.vocab_size << " tokens=" << outcome.total_tokens
            << " -> " << outcome.model_path << "\n";
  return 0;
}

int run_select(const RunConfig& config) {
  const auto outcome = cynsel::cmd_select(config);
  print_warnings(outcome.warnings);
  std::cout << "selected " << outcome.documents << " documents, " << outcome.tokens
            << " tokens";
  if (outcome.final_entropy) std::cout << ", final H=" << *outcome.final_entropy;
  std::cout << " -> " << outcome.manifest_path << "\n";
  return 0;
}

int run_random_select(const RunConfig& config) {
  const auto outcome = cynsel::cmd_random_select(config);
  print_warnings(outcome.warnings);
  std::cout << "randomly selected " << outcome.documents << " documents, " << outcome.tokens
            << " tokens -> " << outcome.manifest_path << "\n";
  return 0;
}

int run_eval(const RunConfig& config) {
  const auto outcome = cynsel::cmd_eval(config);
  std::cout << "target_ppl=" << outcome.report.target_ppl
            << " docs=" << outcome.report.size.doc_count
            << " tokens=" << outcome.report.size.token_count
            << " bytes=" << outcome.report.size.total_bytes << " -> " << outcome.report_path
            << "\n";
  return 0;
}

int run_compare(const RunConfig& config) {
  const auto outcome = cynsel::cmd_compare(config);
  std::printf("%-14s %10s %12s %12s\n", "selection", "units", "tokens", "target_ppl");
  for (const auto& row : outcome.rows) {
    std::printf("%-14s %10llu %12llu %12.4f\n", row.name.c_str(),
                static_cast<unsigned long long>(row.units),
                static_cast<unsigned long long>(row.tokens), row.target_ppl);
  }
  std::cout << "report -> " << outcome.report_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cynsel: greedy cross-entropy corpus subselection"};
  app.set_version_flag("--version", cynsel::kToolVersion);
  app.require_subcommand(1);

  Flags flags;
  CLI::App* build_rep = app.add_subcommand("build-rep", "build the rep unigram model");
  CLI::App* select = app.add_subcommand("select", "greedy document selection");
  CLI::App* random_select =
      app.add_subcommand("random-select", "seeded uniform baseline selection");
  CLI::App* shard_select =
      app.add_subcommand("shard-select", "sharded selection with merge");
  CLI::App* eval = app.add_subcommand("eval", "evaluate a selection manifest");
  CLI::App* compare =
      app.add_subcommand("compare", "sentence- vs document-level comparison");
  for (CLI::App* cmd : {build_rep, select, random_select, shard_select, eval, compare}) {
    add_common_options(cmd, flags);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    // Map CLI11 usage errors onto the documented invalid-input code.
    return code == 0 ? 0 : 2;
  }

  try {
    const RunConfig config = resolve_config(flags);
    if (build_rep->parsed()) return run_build_rep(config);
    if (select->parsed()) return run_select(config);
    if (random_select->parsed()) return run_random_select(config);
    if (shard_select->parsed()) return run_select(config);
    if (eval->parsed()) return run_eval(config);
    if (compare->parsed()) return run_compare(config);
    std::cerr << "error: no subcommand\n";
    return 2;
  } catch (const cynsel::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
