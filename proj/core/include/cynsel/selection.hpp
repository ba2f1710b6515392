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

#ifndef CYNSEL_SELECTION_HPP_
#define CYNSEL_SELECTION_HPP_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cynsel/corpus.hpp"
#include "cynsel/manifest.hpp"
#include "cynsel/rep_model.hpp"

namespace cynsel {

// Incrementally selected corpus: counts over the rep vocabulary plus the
// running cross-entropy H_n. Counts are add-one seeded so every log in the
// scoring formulas stays finite; seed mass lives in selected_total (W_n)
// but is excluded from selected_tokens, the reported total.
struct SelectionState {
  std::vector<std::uint64_t> counts;  // C_n(v) by rep vocab index, >= 1
  std::uint64_t selected_total = 0;   // W_n: seed mass + every accepted token
  std::uint64_t selected_tokens = 0;  // accepted tokens only
  double running_entropy = 0.0;       // H_n
  std::uint64_t steps = 0;            // accepted sentences
};

// counts(v) = 1 for the whole rep vocabulary, W_0 = |V_REP|,
// H_0 = cross_entropy against the seeded counts.
SelectionState seed_state(const RepModel& rep);

// The state viewed as VocabCounts. total is W_n, which exceeds the summed
// modeled counts once off-vocabulary tokens have been accepted.
VocabCounts state_as_counts(const SelectionState& state, const RepModel& rep);

// Decomposed score of one candidate sentence. delta is computed as
// penalty + gain in this exact order, so the decomposition is bitwise.
struct SentenceDelta {
  double delta = 0.0;
  double penalty = 0.0;
  double gain = 0.0;
};

// A sentence reduced to what scoring needs: its token count and its
// rep-vocabulary bag of words, sorted by vocab index (== lexicographic
// word order), which pins the floating-point summation order.
struct SentenceProfile {
  std::uint32_t token_count = 0;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> rep_counts;  // (index, count)
};

SentenceProfile compile_sentence(const RepModel& rep, const Sentence& sentence);

// ln((W_n + w) / W_n) >= 0.
double penalty(const SelectionState& state, std::uint64_t sentence_length);

// sum_v p_REP(v) * ln(C_n(v) / (C_n(v) + c(v))) <= 0. Only rep-vocabulary
// words contribute.
double gain(const SelectionState& state, const RepModel& rep, const SentenceProfile& profile);
double gain(const SelectionState& state, const RepModel& rep, const Sentence& sentence);

SentenceDelta delta_h(const SelectionState& state, const RepModel& rep,
                      const SentenceProfile& profile);
SentenceDelta delta_h(const SelectionState& state, const RepModel& rep,
                      const Sentence& sentence);

// Accepts a sentence: rep-word counts grow by the sentence bag, W_n by the
// full token count (off-vocabulary included), H_n by the accepted delta.
void apply_sentence(SelectionState& state, const SentenceProfile& profile, double delta);

// Convenience form that computes the delta itself.
SentenceDelta update_state(SelectionState& state, const RepModel& rep,
                           const Sentence& sentence);

// Score(D) = mean of member-sentence deltas, every sentence scored against
// the same state. Throws on an empty document.
struct DocumentScore {
  std::uint64_t doc_id = 0;
  double score = 0.0;
  std::uint64_t sentence_count = 0;
};

DocumentScore score_document(const SelectionState& state, const RepModel& rep,
                             const Document& doc);

// Budget: either a document fraction k in (0, 1] or an absolute token
// count. A token budget keeps selecting until the accepted token total
// reaches it (the crossing document is included).
struct SelectionBudget {
  enum class Kind { Fraction, Tokens };
  Kind kind = Kind::Fraction;
  double fraction = 1.0;
  std::uint64_t tokens = 0;

  static SelectionBudget from_fraction(double k);
  static SelectionBudget from_tokens(std::uint64_t tokens);
};

enum class SelectionMode { Exact, Lazy };

const char* to_string(SelectionMode mode);

// Tie-breaking is always ascending doc_id.
struct SelectionConfig {
  SelectionBudget budget;
  SelectionMode mode = SelectionMode::Exact;
};

// Number of documents a fraction budget resolves to: ceil(k * n), guarded
// against binary rounding of exact rationals like 0.01 * 100.
std::uint64_t resolve_fraction_count(double fraction, std::uint64_t n);

struct SelectionResult {
  SelectionManifest manifest;
  std::vector<double> h_trace;  // H_0, then H after each accepted document
  std::vector<std::string> warnings;
};

// Greedy document selection. Exact mode re-scores every remaining document
// each step; lazy mode runs a stale-score re-validating priority queue and
// is an approximation of exact greedy. `threads` parallelizes candidate
// scoring; any thread count produces identical output.
SelectionResult select_documents(const std::vector<Document>& corpus, const RepModel& rep,
                                 const SelectionConfig& config, unsigned threads = 1);

// Document selection with an explicit document-count quota. The manifest
// header still echoes `header_config` (the shard runner resolves global
// fractions into per-shard quotas and calls this).
SelectionResult select_documents_with_quota(const std::vector<Document>& corpus,
                                            const RepModel& rep,
                                            const SelectionConfig& header_config,
                                            std::uint64_t quota, unsigned threads = 1);

// Sentence-level selection: the same greedy over single-sentence units.
struct SentencePick {
  std::uint64_t rank = 0;
  std::uint64_t sentence_index = 0;
  double score = 0.0;
  double penalty = 0.0;
  double gain = 0.0;
  std::uint64_t token_count = 0;
  double cumulative_entropy = 0.0;
};

struct SentenceSelectionResult {
  std::vector<SentencePick> picks;
  std::vector<double> h_trace;
  std::vector<std::string> warnings;
};

SentenceSelectionResult select_sentences(const std::vector<Sentence>& sentences,
                                         const RepModel& rep, const SelectionConfig& config,
                                         unsigned threads = 1);

// Uniform sample without replacement, in draw order. Score fields of the
// manifest are null. A fraction budget draws ceil(k*N) documents; a token
// budget draws until the accepted token total reaches it.
SelectionResult random_select(const std::vector<Document>& corpus,
                              const SelectionBudget& budget, std::uint64_t seed);

}  // namespace cynsel

#endif  // CYNSEL_SELECTION_HPP_
