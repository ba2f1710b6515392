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

#ifndef CYNSEL_MANIFEST_HPP_
#define CYNSEL_MANIFEST_HPP_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cynsel {

// One selected document. Score fields are null in random-baseline
// manifests. `shard`/`shard_rank` keep per-shard provenance; unsharded
// selections use shard 0 with shard_rank == rank.
struct ManifestEntry {
  std::uint64_t rank = 0;
  std::uint64_t doc_id = 0;
  std::optional<std::string> domain;
  std::optional<double> score;
  std::optional<double> penalty_sum;
  std::optional<double> gain_sum;
  std::uint64_t sentence_count = 0;
  std::uint64_t token_count = 0;
  std::uint64_t byte_size = 0;
  std::optional<double> cumulative_entropy;
  std::uint32_t shard = 0;
  std::uint64_t shard_rank = 0;

  bool operator==(const ManifestEntry&) const = default;
};

struct ManifestHeader {
  std::string mode;  // "exact" | "lazy" | "random"
  std::string budget_kind;  // "fraction" | "tokens"
  double budget_fraction = 0.0;     // set when budget_kind == "fraction"
  std::uint64_t budget_tokens = 0;  // set when budget_kind == "tokens"
  std::uint64_t seed_mass = 0;      // |V_REP|; add-one seeding bookkeeping
  std::uint32_t shards = 1;
  std::optional<std::uint64_t> rng_seed;   // random mode only
  std::optional<std::string> order_note;   // present on multi-shard merges
  std::string tool_version;
  std::string config_hash;
  // Flat echo of the run configuration, key -> rendered value.
  std::map<std::string, std::string> config_echo;

  bool operator==(const ManifestHeader&) const = default;
};

// Ordered record of a selection run. For single-state selections the entry
// order is the greedy acceptance order.
struct SelectionManifest {
  ManifestHeader header;
  std::vector<ManifestEntry> entries;

  bool operator==(const SelectionManifest&) const = default;
};

// JSONL serialization: one header object line, then one object per entry.
// Writing is byte-deterministic for fixed content.
void write_manifest(const SelectionManifest& manifest, std::ostream& out);
void write_manifest(const SelectionManifest& manifest, const std::string& path);
std::string manifest_to_string(const SelectionManifest& manifest);

SelectionManifest read_manifest(std::istream& in);
SelectionManifest read_manifest_file(const std::string& path);

// H_n trace: comment header plus one shortest-round-trip double per line.
void write_h_trace(const std::vector<double>& trace, const std::string& config_hash,
                   const std::string& path);
std::vector<double> read_h_trace(const std::string& path);

}  // namespace cynsel

#endif  // CYNSEL_MANIFEST_HPP_
