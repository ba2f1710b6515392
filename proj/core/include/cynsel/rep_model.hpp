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

#ifndef CYNSEL_REP_MODEL_HPP_
#define CYNSEL_REP_MODEL_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "cynsel/corpus.hpp"

namespace cynsel {

// Word-type counts over some token multiset. The sorted map keeps every
// iteration order deterministic.
struct VocabCounts {
  std::map<std::string, std::uint64_t> counts;
  std::uint64_t total = 0;

  void add(std::string_view token) {
    ++counts[std::string(token)];
    ++total;
  }
  void add(const Sentence& sentence) {
    for (const auto& t : sentence.tokens) add(t);
  }
  void add(const Document& doc) {
    for (const auto& s : doc.sentences) add(s);
  }
};

VocabCounts count_tokens(const std::vector<Document>& docs);

// Unigram relative frequencies of the representative corpus. Vocabulary is
// kept sorted; word index doubles as the deterministic iteration order for
// every entropy sum in the engine. Immutable after construction.
class RepModel {
 public:
  // Relative frequencies after dropping words with count < min_count and
  // renormalizing over the survivors. Throws InputError when nothing
  // survives ("representative corpus too small").
  static RepModel from_counts(const VocabCounts& counts, std::uint64_t min_count = 1);

  std::size_t size() const { return vocab_.size(); }
  const std::string& word(std::uint32_t index) const { return vocab_[index]; }
  double prob(std::uint32_t index) const { return probs_[index]; }
  std::uint64_t count(std::uint32_t index) const { return counts_[index]; }
  std::uint64_t total() const { return total_; }
  const std::vector<std::string>& vocab() const { return vocab_; }

  std::optional<std::uint32_t> find(std::string_view word) const {
    auto it = index_.find(std::string(word));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  // Flat text format: comment header carrying the total, then one
  // "word<TAB>count" line per word in vocabulary order. Lossless.
  void save(const std::string& path, const std::string& config_hash = "") const;
  static RepModel load(const std::string& path);

  bool operator==(const RepModel& other) const {
    return vocab_ == other.vocab_ && counts_ == other.counts_ && total_ == other.total_;
  }

 private:
  RepModel() = default;

  std::vector<std::string> vocab_;    // sorted ascending
  std::vector<std::uint64_t> counts_; // surviving counts, by index
  std::vector<double> probs_;         // count / total, by index
  std::uint64_t total_ = 0;           // sum of surviving counts
  std::unordered_map<std::string, std::uint32_t> index_;
};

// Builds the model by streaming the representative corpus.
RepModel build_rep_model(CorpusReader& rep_corpus, std::uint64_t min_count = 1);
RepModel build_rep_model(const std::vector<Document>& rep_corpus, std::uint64_t min_count = 1);

// H = -sum_{v in V_REP} p_REP(v) * ln(counts(v) / total). Words outside the
// model vocabulary contribute only through `counts.total`. Every modeled
// word must have a nonzero count; otherwise throws Error("unseeded state").
// `counts.total` may exceed the summed modeled counts (selection states
// carry off-vocabulary token mass in the total).
double cross_entropy(const RepModel& rep, const VocabCounts& counts);

}  // namespace cynsel

#endif  // CYNSEL_REP_MODEL_HPP_
