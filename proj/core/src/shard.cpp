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

#include "cynsel/shard.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <thread>

namespace cynsel {

namespace {

constexpr const char* kOrderNote =
    "merged order sorts per-shard scores ascending; scores from different "
    "shards were computed against different states and are not strictly "
    "comparable";

}  // namespace

std::uint32_t ShardPlan::shard_of(std::uint64_t position) const {
  const auto it = std::upper_bound(offsets.begin(), offsets.end(), position);
  return static_cast<std::uint32_t>(it - offsets.begin()) - 1;
}

ShardPlan plan_shards(std::uint64_t corpus_size, std::uint32_t num_shards, double fraction) {
  if (num_shards == 0) throw InputError("num_shards must be >= 1");
  if (num_shards > corpus_size) {
    throw InputError("num_shards (" + std::to_string(num_shards) +
                     ") exceeds corpus size (" + std::to_string(corpus_size) + ")");
  }
  if (!(fraction > 0.0) || fraction > 1.0) {
    throw InputError("budget fraction must be in (0, 1]");
  }

  ShardPlan plan;
  plan.num_shards = num_shards;
  plan.offsets.resize(num_shards + 1);
  const std::uint64_t base = corpus_size / num_shards;
  const std::uint64_t extra = corpus_size % num_shards;
  plan.offsets[0] = 0;
  for (std::uint32_t i = 0; i < num_shards; ++i) {
    plan.offsets[i + 1] = plan.offsets[i] + base + (i < extra ? 1 : 0);
  }

  // floor(k * shard_size) per shard, remainder granted to the lowest-index
  // shards so the merged count matches the global ceil(k * N).
  const std::uint64_t global = resolve_fraction_count(fraction, corpus_size);
  plan.quotas.resize(num_shards);
  std::uint64_t assigned = 0;
  for (std::uint32_t i = 0; i < num_shards; ++i) {
    const double raw = fraction * static_cast<double>(plan.shard_size(i));
    plan.quotas[i] = static_cast<std::uint64_t>(std::floor(raw + 1e-9));
    plan.quotas[i] = std::min(plan.quotas[i], plan.shard_size(i));
    assigned += plan.quotas[i];
  }
  std::uint64_t remainder = global > assigned ? global - assigned : 0;
  for (std::uint32_t i = 0; remainder > 0; i = (i + 1) % num_shards) {
    if (plan.quotas[i] < plan.shard_size(i)) {
      ++plan.quotas[i];
      --remainder;
    }
  }
  return plan;
}

SelectionManifest merge_shard_manifests(const std::vector<SelectionManifest>& shards) {
  if (shards.empty()) throw InputError("no shard manifests to merge");
  SelectionManifest merged;
  merged.header = shards.front().header;
  merged.header.shards = static_cast<std::uint32_t>(shards.size());

  if (shards.size() == 1) {
    // Degenerate case: identical to the unsharded run, order included.
    merged.entries = shards.front().entries;
    return merged;
  }

  merged.header.order_note = kOrderNote;
  for (const auto& shard : shards) {
    merged.entries.insert(merged.entries.end(), shard.entries.begin(), shard.entries.end());
  }
  std::stable_sort(merged.entries.begin(), merged.entries.end(),
                   [](const ManifestEntry& a, const ManifestEntry& b) {
                     const double sa = a.score.value_or(0.0);
                     const double sb = b.score.value_or(0.0);
                     if (sa != sb) return sa < sb;
                     return a.doc_id < b.doc_id;
                   });
  for (std::size_t i = 0; i < merged.entries.size(); ++i) {
    merged.entries[i].rank = i;
  }
  return merged;
}

ShardedResult run_sharded(const std::vector<Document>& corpus, const RepModel& rep,
                          const SelectionConfig& config, const ShardPlan& plan,
                          unsigned threads) {
  if (config.budget.kind != SelectionBudget::Kind::Fraction && plan.num_shards > 1) {
    throw InputError("sharded selection requires a fraction budget");
  }
  if (plan.offsets.back() != corpus.size()) {
    throw InputError("shard plan does not cover the corpus");
  }

  ShardedResult result;
  result.per_shard.resize(plan.num_shards);
  result.per_shard_traces.resize(plan.num_shards);
  std::vector<std::vector<std::string>> shard_warnings(plan.num_shards);
  std::vector<std::exception_ptr> failures(plan.num_shards);

  const auto run_shard = [&](std::uint32_t shard) {
    try {
      const std::vector<Document> slice(
          corpus.begin() + static_cast<std::ptrdiff_t>(plan.offsets[shard]),
          corpus.begin() + static_cast<std::ptrdiff_t>(plan.offsets[shard + 1]));
      SelectionResult r =
          select_documents_with_quota(slice, rep, config, plan.quotas[shard], 1);
      result.per_shard[shard] = std::move(r.manifest);
      result.per_shard_traces[shard] = std::move(r.h_trace);
      shard_warnings[shard] = std::move(r.warnings);
      for (auto& entry : result.per_shard[shard].entries) {
        entry.shard = shard;
        entry.shard_rank = entry.rank;
      }
    } catch (...) {
      failures[shard] = std::current_exception();
    }
  };

  if (threads <= 1 || plan.num_shards == 1) {
    for (std::uint32_t s = 0; s < plan.num_shards; ++s) run_shard(s);
  } else {
    std::vector<std::thread> workers;
    std::atomic<std::uint32_t> next{0};
    const unsigned worker_count = std::min<unsigned>(threads, plan.num_shards);
    for (unsigned t = 0; t < worker_count; ++t) {
      workers.emplace_back([&] {
        for (;;) {
          const std::uint32_t s = next.fetch_add(1);
          if (s >= plan.num_shards) return;
          run_shard(s);
        }
      });
    }
    for (auto& w : workers) w.join();
  }

  for (std::uint32_t s = 0; s < plan.num_shards; ++s) {
    if (failures[s]) {
      try {
        std::rethrow_exception(failures[s]);
      } catch (const std::exception& e) {
        throw Error("shard " + std::to_string(s) + ": " + e.what());
      }
    }
    for (const auto& w : shard_warnings[s]) {
      result.warnings.push_back("shard " + std::to_string(s) + ": " + w);
    }
  }

  result.merged = merge_shard_manifests(result.per_shard);
  return result;
}

std::string shard_manifest_filename(std::uint32_t shard) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "shard-%04u.jsonl", shard);
  return buf;
}

}  // namespace cynsel
