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

#ifndef CYNSEL_RUN_CONFIG_HPP_
#define CYNSEL_RUN_CONFIG_HPP_

#include <cstdint>
#include <map>
#include <string>

#include "cynsel/corpus.hpp"
#include "cynsel/selection.hpp"

namespace cynsel {

// Everything a run needs, loadable from a flat key = value config file and
// overridable by CLI flags. A fixed config (and seed, for the random
// baseline) makes a run fully deterministic; `threads` is excluded from
// the canonical form so the artifact bytes never depend on core count.
struct RunConfig {
  std::string corpus_path;
  std::string rep_corpus_path;
  std::string rep_model_path;  // takes precedence over rep_corpus_path
  std::string target_path;
  std::string manifest_path;   // eval input
  std::string out_dir = "out";

  IngestConfig ingest;
  std::uint64_t min_count = 1;

  double k = 0.01;
  std::uint64_t token_budget = 0;  // > 0 switches to a token budget
  SelectionMode mode = SelectionMode::Exact;
  std::uint32_t shards = 1;
  std::uint32_t threads = 1;  // 0 = hardware concurrency
  std::uint64_t seed = 0;

  bool emit_tsv = false;
  bool emit_trace = true;

  // Parses "key = value" lines; '#' starts a comment. Unknown keys and
  // unparsable values throw InputError.
  static RunConfig from_file(const std::string& path);
  void set(const std::string& key, const std::string& value);

  // Sorted key=value rendering of every reproducibility-relevant field.
  std::string canonical() const;
  // FNV-1a 64 over canonical(), as 16 hex digits.
  std::string config_hash() const;
  // The canonical form as a key -> value map, for manifest header echo.
  std::map<std::string, std::string> echo() const;

  SelectionConfig selection_config() const;
  unsigned resolved_threads() const;
};

std::uint64_t fnv1a64(std::string_view data);

}  // namespace cynsel

#endif  // CYNSEL_RUN_CONFIG_HPP_
