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

#ifndef CYNSEL_EVALUATION_HPP_
#define CYNSEL_EVALUATION_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cynsel/corpus.hpp"
#include "cynsel/manifest.hpp"
#include "cynsel/rep_model.hpp"

namespace cynsel {

struct SizeStats {
  std::uint64_t total_bytes = 0;
  double mean_doc_tokens = 0.0;  // 0 for an empty manifest
  std::uint64_t doc_count = 0;
  std::uint64_t token_count = 0;
};

struct EvalReport {
  double target_ppl = 0.0;  // unigram proxy perplexity
  std::map<std::string, double> domain_fractions;
  SizeStats size;
};

// Add-one smoothed unigram perplexity of the target under the selected
// counts. Vocabulary is the selected vocabulary plus a single UNK bucket;
// unseen target tokens map to UNK. Natural log; returns
// exp(mean negative log-likelihood per token). Throws on an empty target.
double unigram_ppl(const VocabCounts& selected_counts, const std::vector<Document>& target);
double unigram_ppl(const VocabCounts& selected_counts, CorpusReader& target);

// Fraction of selected documents per domain tag; untagged documents are
// grouped under "untagged". Throws on an empty manifest.
std::map<std::string, double> domain_distribution(const SelectionManifest& manifest);

// Sums and means over the selected documents, resolved against the corpus.
// Seed mass never appears here. Throws on a doc_id missing from the corpus.
SizeStats size_stats(const SelectionManifest& manifest, const std::vector<Document>& corpus);

// Token counts over the documents a manifest selects.
VocabCounts selected_counts(const SelectionManifest& manifest,
                            const std::vector<Document>& corpus);

// Report serialization: a single JSON object; optional TSV of domain
// fractions sorted by descending fraction (plot-ready).
std::string eval_report_to_json(const EvalReport& report, const std::string& tool_version,
                                const std::string& config_hash);
std::string domain_fractions_to_tsv(const std::map<std::string, double>& fractions);

}  // namespace cynsel

#endif  // CYNSEL_EVALUATION_HPP_
