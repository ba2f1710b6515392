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

#ifndef CYNSEL_SHARD_HPP_
#define CYNSEL_SHARD_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "cynsel/corpus.hpp"
#include "cynsel/rep_model.hpp"
#include "cynsel/selection.hpp"

namespace cynsel {

// Contiguous near-equal partition of corpus positions. Shard sizes differ
// by at most one; quotas floor k*size per shard and hand the remainder to
// the lowest-index shards so the global count matches ceil(k*N).
struct ShardPlan {
  std::uint32_t num_shards = 1;
  std::vector<std::uint64_t> offsets;  // num_shards + 1 fenceposts over positions
  std::vector<std::uint64_t> quotas;   // documents each shard selects

  std::uint64_t shard_size(std::uint32_t shard) const {
    return offsets[shard + 1] - offsets[shard];
  }
  std::uint32_t shard_of(std::uint64_t position) const;
};

// Throws InputError when num_shards is 0 or exceeds corpus_size.
ShardPlan plan_shards(std::uint64_t corpus_size, std::uint32_t num_shards, double fraction);

struct ShardedResult {
  SelectionManifest merged;
  std::vector<SelectionManifest> per_shard;
  std::vector<std::vector<double>> per_shard_traces;
  std::vector<std::string> warnings;
};

// Runs selection independently per shard against the shared rep model and
// merges. With one shard the merged manifest is identical to unsharded
// select_documents output. With several, merged entries are re-sorted by
// (score, doc_id) ascending; that ordering is cosmetic, since scores from
// different shards were computed against different states. Shards run on
// up to `threads` workers. Only fraction budgets shard; a token budget
// throws InputError.
ShardedResult run_sharded(const std::vector<Document>& corpus, const RepModel& rep,
                          const SelectionConfig& config, const ShardPlan& plan,
                          unsigned threads = 1);

// Merge previously written per-shard manifests (shard-NNNN.jsonl files),
// e.g. after distributed runs over a shared filesystem.
SelectionManifest merge_shard_manifests(const std::vector<SelectionManifest>& shards);

std::string shard_manifest_filename(std::uint32_t shard);

}  // namespace cynsel

#endif  // CYNSEL_SHARD_HPP_
