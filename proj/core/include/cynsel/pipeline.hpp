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

#ifndef CYNSEL_PIPELINE_HPP_
#define CYNSEL_PIPELINE_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cynsel/evaluation.hpp"
#include "cynsel/run_config.hpp"

namespace cynsel {

// File-level commands behind the CLI subcommands. Each consumes a
// RunConfig, writes its artifacts under out_dir, and returns what it wrote
// so callers can chain runs.

struct BuildRepOutcome {
  std::string model_path;
  std::uint64_t vocab_size = 0;
  std::uint64_t total_tokens = 0;
};

BuildRepOutcome cmd_build_rep(const RunConfig& config);

struct SelectOutcome {
  std::string manifest_path;
  std::vector<std::string> shard_manifest_paths;
  std::vector<std::string> trace_paths;
  std::uint64_t documents = 0;
  std::uint64_t tokens = 0;
  std::optional<double> final_entropy;  // absent for the random baseline
  std::vector<std::string> warnings;
};

// Cynical selection; config.shards > 1 runs the sharded path and also
// writes shard-NNNN.jsonl intermediates.
SelectOutcome cmd_select(const RunConfig& config);

// Seeded uniform baseline with the same manifest schema.
SelectOutcome cmd_random_select(const RunConfig& config);

struct EvalOutcome {
  std::string report_path;
  std::optional<std::string> tsv_path;
  EvalReport report;
};

EvalOutcome cmd_eval(const RunConfig& config);

// Sentence- vs document-level harness: document selection at the
// configured budget, then sentence-level and random-document baselines
// matched to its token size, each scored by unigram proxy perplexity
// against the target corpus.
struct CompareRow {
  std::string name;
  std::uint64_t units = 0;  // documents or sentences selected
  std::uint64_t tokens = 0;
  double target_ppl = 0.0;
};

struct CompareOutcome {
  std::string report_path;
  std::vector<CompareRow> rows;
};

CompareOutcome cmd_compare(const RunConfig& config);

}  // namespace cynsel

#endif  // CYNSEL_PIPELINE_HPP_
