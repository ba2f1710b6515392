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

#include "cynsel/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

namespace cynsel {
namespace {

// Add-one smoothed unigram model over the selected vocabulary plus UNK.
struct SmoothedModel {
  std::unordered_map<std::string_view, double> log_prob;
  double unk_log_prob = 0.0;

  explicit SmoothedModel(const VocabCounts& counts) {
    const double denom = static_cast<double>(counts.total) +
                         static_cast<double>(counts.counts.size() + 1);
    for (const auto& [word, count] : counts.counts) {
      log_prob.emplace(word, std::log((static_cast<double>(count) + 1.0) / denom));
    }
    unk_log_prob = std::log(1.0 / denom);
  }

  double score(const std::string& token) const {
    const auto it = log_prob.find(std::string_view(token));
    return it == log_prob.end() ? unk_log_prob : it->second;
  }
};

struct PplAccumulator {
  double neg_ll = 0.0;
  std::uint64_t tokens = 0;

  void add(const SmoothedModel& model, const Document& doc) {
    for (const auto& sentence : doc.sentences) {
      for (const auto& token : sentence.tokens) {
        neg_ll -= model.score(token);
        ++tokens;
      }
    }
  }

  double finish() const {
    if (tokens == 0) throw InputError("perplexity target is empty");
    return std::exp(neg_ll / static_cast<double>(tokens));
  }
};

}  // namespace

double unigram_ppl(const VocabCounts& selected_counts, const std::vector<Document>& target) {
  if (selected_counts.total == 0) throw InputError("selected counts are empty");
  const SmoothedModel model(selected_counts);
  PplAccumulator acc;
  for (const auto& doc : target) acc.add(model, doc);
  return acc.finish();
}

double unigram_ppl(const VocabCounts& selected_counts, CorpusReader& target) {
  if (selected_counts.total == 0) throw InputError("selected counts are empty");
  const SmoothedModel model(selected_counts);
  PplAccumulator acc;
  while (auto doc = target.next()) acc.add(model, *doc);
  return acc.finish();
}

std::map<std::string, double> domain_distribution(const SelectionManifest& manifest) {
  if (manifest.entries.empty()) throw InputError("manifest is empty");
  std::map<std::string, std::uint64_t> counts;
  for (const auto& entry : manifest.entries) {
    ++counts[entry.domain.value_or("untagged")];
  }
  std::map<std::string, double> fractions;
  const double n = static_cast<double>(manifest.entries.size());
  for (const auto& [domain, count] : counts) {
    fractions[domain] = static_cast<double>(count) / n;
  }
  return fractions;
}

SizeStats size_stats(const SelectionManifest& manifest, const std::vector<Document>& corpus) {
  std::unordered_map<std::uint64_t, const Document*> by_id;
  by_id.reserve(corpus.size());
  for (const auto& doc : corpus) by_id.emplace(doc.doc_id, &doc);

  SizeStats stats;
  for (const auto& entry : manifest.entries) {
    const auto it = by_id.find(entry.doc_id);
    if (it == by_id.end()) {
      throw InputError("manifest doc_id " + std::to_string(entry.doc_id) +
                       " not found in corpus");
    }
    stats.total_bytes += it->second->byte_size;
    stats.token_count += it->second->token_count();
    ++stats.doc_count;
  }
  stats.mean_doc_tokens = stats.doc_count == 0
                              ? 0.0
                              : static_cast<double>(stats.token_count) /
                                    static_cast<double>(stats.doc_count);
  return stats;
}

VocabCounts selected_counts(const SelectionManifest& manifest,
                            const std::vector<Document>& corpus) {
  std::unordered_map<std::uint64_t, const Document*> by_id;
  by_id.reserve(corpus.size());
  for (const auto& doc : corpus) by_id.emplace(doc.doc_id, &doc);

  VocabCounts counts;
  for (const auto& entry : manifest.entries) {
    const auto it = by_id.find(entry.doc_id);
    if (it == by_id.end()) {
      throw InputError("manifest doc_id " + std::to_string(entry.doc_id) +
                       " not found in corpus");
    }
    counts.add(*it->second);
  }
  return counts;
}

std::string eval_report_to_json(const EvalReport& report, const std::string& tool_version,
                                const std::string& config_hash) {
  nlohmann::json j;
  j["type"] = "cynsel_eval_report";
  j["tool_version"] = tool_version;
  j["config_hash"] = config_hash;
  j["ppl_metric"] = "unigram_proxy";
  j["target_ppl"] = report.target_ppl;
  nlohmann::json fractions;
  for (const auto& [domain, fraction] : report.domain_fractions) {
    fractions[domain] = fraction;
  }
  j["domain_fractions"] = fractions;
  j["total_bytes"] = report.size.total_bytes;
  j["mean_doc_tokens"] = report.size.mean_doc_tokens;
  j["doc_count"] = report.size.doc_count;
  j["token_count"] = report.size.token_count;
  return j.dump(2) + "\n";
}

std::string domain_fractions_to_tsv(const std::map<std::string, double>& fractions) {
  std::vector<std::pair<std::string, double>> rows(fractions.begin(), fractions.end());
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  std::ostringstream out;
  out << "domain\tfraction\n";
  for (const auto& [domain, fraction] : rows) {
    out << domain << '\t' << fraction << '\n';
  }
  return out.str();
}

}  // namespace cynsel
