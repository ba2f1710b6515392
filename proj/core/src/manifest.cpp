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

#include "cynsel/manifest.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cynsel/error.hpp"
#include "cynsel/version.hpp"

namespace cynsel {
namespace {

using nlohmann::json;

constexpr const char* kSeedNote =
    "counts are add-one seeded over the rep vocabulary; seed mass is "
    "excluded from reported token totals";

json header_to_json(const ManifestHeader& h) {
  json j;
  j["type"] = "cynsel_manifest";
  j["version"] = 1;
  j["tool_version"] = h.tool_version;
  j["config_hash"] = h.config_hash;
  j["mode"] = h.mode;
  json budget;
  budget["kind"] = h.budget_kind;
  if (h.budget_kind == "tokens") {
    budget["tokens"] = h.budget_tokens;
  } else {
    budget["fraction"] = h.budget_fraction;
  }
  j["budget"] = budget;
  j["seed_mass"] = h.seed_mass;
  if (h.mode != "random") j["seed_note"] = kSeedNote;
  if (h.mode == "lazy") j["mode_note"] = "lazy mode approximates exact greedy";
  j["shards"] = h.shards;
  if (h.rng_seed) j["rng_seed"] = *h.rng_seed;
  if (h.order_note) j["order_note"] = *h.order_note;
  if (!h.config_echo.empty()) {
    json echo;
    for (const auto& [key, value] : h.config_echo) echo[key] = value;
    j["config"] = echo;
  }
  return j;
}

ManifestHeader header_from_json(const json& j) {
  ManifestHeader h;
  if (j.value("type", "") != "cynsel_manifest") {
    throw InputError("not a cynsel manifest header");
  }
  h.tool_version = j.value("tool_version", "");
  h.config_hash = j.value("config_hash", "");
  h.mode = j.value("mode", "");
  const auto& budget = j.at("budget");
  h.budget_kind = budget.value("kind", "");
  if (h.budget_kind == "tokens") {
    h.budget_tokens = budget.at("tokens").get<std::uint64_t>();
  } else {
    h.budget_fraction = budget.at("fraction").get<double>();
  }
  h.seed_mass = j.value("seed_mass", std::uint64_t{0});
  h.shards = j.value("shards", std::uint32_t{1});
  if (j.contains("rng_seed")) h.rng_seed = j.at("rng_seed").get<std::uint64_t>();
  if (j.contains("order_note")) h.order_note = j.at("order_note").get<std::string>();
  if (j.contains("config")) {
    for (const auto& [key, value] : j.at("config").items()) {
      h.config_echo[key] = value.get<std::string>();
    }
  }
  return h;
}

json entry_to_json(const ManifestEntry& e) {
  json j;
  j["rank"] = e.rank;
  j["doc_id"] = e.doc_id;
  j["domain"] = e.domain ? json(*e.domain) : json(nullptr);
  j["score"] = e.score ? json(*e.score) : json(nullptr);
  j["penalty_sum"] = e.penalty_sum ? json(*e.penalty_sum) : json(nullptr);
  j["gain_sum"] = e.gain_sum ? json(*e.gain_sum) : json(nullptr);
  j["sentence_count"] = e.sentence_count;
  j["token_count"] = e.token_count;
  j["byte_size"] = e.byte_size;
  j["cumulative_entropy"] = e.cumulative_entropy ? json(*e.cumulative_entropy) : json(nullptr);
  j["shard"] = e.shard;
  j["shard_rank"] = e.shard_rank;
  return j;
}

ManifestEntry entry_from_json(const json& j) {
  ManifestEntry e;
  e.rank = j.at("rank").get<std::uint64_t>();
  e.doc_id = j.at("doc_id").get<std::uint64_t>();
  if (!j.at("domain").is_null()) e.domain = j.at("domain").get<std::string>();
  if (!j.at("score").is_null()) e.score = j.at("score").get<double>();
  if (!j.at("penalty_sum").is_null()) e.penalty_sum = j.at("penalty_sum").get<double>();
  if (!j.at("gain_sum").is_null()) e.gain_sum = j.at("gain_sum").get<double>();
  e.sentence_count = j.at("sentence_count").get<std::uint64_t>();
  e.token_count = j.at("token_count").get<std::uint64_t>();
  e.byte_size = j.at("byte_size").get<std::uint64_t>();
  if (!j.at("cumulative_entropy").is_null()) {
    e.cumulative_entropy = j.at("cumulative_entropy").get<double>();
  }
  e.shard = j.value("shard", std::uint32_t{0});
  e.shard_rank = j.value("shard_rank", e.rank);
  return e;
}

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

}  // namespace

void write_manifest(const SelectionManifest& manifest, std::ostream& out) {
  out << header_to_json(manifest.header).dump() << '\n';
  for (const auto& entry : manifest.entries) {
    out << entry_to_json(entry).dump() << '\n';
  }
}

void write_manifest(const SelectionManifest& manifest, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write manifest: " + path);
  write_manifest(manifest, out);
  if (!out) throw Error("write failed: " + path);
}

std::string manifest_to_string(const SelectionManifest& manifest) {
  std::ostringstream out;
  write_manifest(manifest, out);
  return out.str();
}

SelectionManifest read_manifest(std::istream& in) {
  SelectionManifest manifest;
  std::string line;
  bool have_header = false;
  std::uint64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto j = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded() || !j.is_object()) {
      throw InputError("malformed manifest line " + std::to_string(line_no));
    }
    try {
      if (!have_header) {
        manifest.header = header_from_json(j);
        have_header = true;
      } else {
        manifest.entries.push_back(entry_from_json(j));
      }
    } catch (const json::exception& e) {
      throw InputError("malformed manifest line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!have_header) throw InputError("manifest has no header line");
  return manifest;
}

SelectionManifest read_manifest_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open manifest: " + path);
  return read_manifest(in);
}

void write_h_trace(const std::vector<double>& trace, const std::string& config_hash,
                   const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write h-trace: " + path);
  out << "# cynsel h-trace v1\n";
  out << "# tool_version " << kToolVersion << "\n";
  out << "# config_hash " << config_hash << "\n";
  for (const double h : trace) out << format_double(h) << '\n';
  if (!out) throw Error("write failed: " + path);
}

std::vector<double> read_h_trace(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open h-trace: " + path);
  std::vector<double> trace;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    double value = 0.0;
    const auto res = std::from_chars(line.data(), line.data() + line.size(), value);
    if (res.ec != std::errc{}) throw InputError("malformed h-trace line: " + line);
    trace.push_back(value);
  }
  return trace;
}

}  // namespace cynsel
