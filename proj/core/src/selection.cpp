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

#include "cynsel/selection.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <thread>

#include "cynsel/rng.hpp"
#include "cynsel/version.hpp"

namespace cynsel {
namespace {

// Scoring spends nearly all its time in logs of small integer counts;
// table them. log(a/b) becomes table[a] - table[b], which keeps every
// gain term <= 0 because correctly rounded log is monotone.
inline double log_count(std::uint64_t n) {
  constexpr std::size_t kTableSize = 1 << 16;
  static const std::vector<double>& table = *[] {
    auto* t = new std::vector<double>(kTableSize);
    (*t)[0] = 0.0;  // never read
    for (std::size_t i = 1; i < kTableSize; ++i) {
      (*t)[i] = std::log(static_cast<double>(i));
    }
    return t;
  }();
  return n < kTableSize ? table[n] : std::log(static_cast<double>(n));
}

}  // namespace

SelectionState seed_state(const RepModel& rep) {
  SelectionState state;
  state.counts.assign(rep.size(), 1);
  state.selected_total = rep.size();
  state.selected_tokens = 0;
  state.steps = 0;
  // H_0 = -sum p(v) * ln(1 / |V|) over the uniform seed counts.
  const double total = static_cast<double>(state.selected_total);
  double h = 0.0;
  for (std::uint32_t i = 0; i < rep.size(); ++i) {
    h -= rep.prob(i) * std::log(1.0 / total);
  }
  state.running_entropy = h;
  return state;
}

VocabCounts state_as_counts(const SelectionState& state, const RepModel& rep) {
  VocabCounts counts;
  for (std::uint32_t i = 0; i < rep.size(); ++i) {
    counts.counts.emplace(rep.word(i), state.counts[i]);
  }
  counts.total = state.selected_total;  // includes off-vocabulary mass
  return counts;
}

SentenceProfile compile_sentence(const RepModel& rep, const Sentence& sentence) {
  SentenceProfile profile;
  profile.token_count = static_cast<std::uint32_t>(sentence.length());
  for (const auto& token : sentence.tokens) {
    if (auto index = rep.find(token)) {
      profile.rep_counts.emplace_back(*index, 1);
    }
  }
  std::sort(profile.rep_counts.begin(), profile.rep_counts.end());
  // Collapse duplicate indices into (index, count) pairs.
  std::size_t out = 0;
  for (std::size_t i = 0; i < profile.rep_counts.size();) {
    std::size_t j = i;
    std::uint32_t count = 0;
    while (j < profile.rep_counts.size() &&
           profile.rep_counts[j].first == profile.rep_counts[i].first) {
      ++count;
      ++j;
    }
    profile.rep_counts[out++] = {profile.rep_counts[i].first, count};
    i = j;
  }
  profile.rep_counts.resize(out);
  return profile;
}

double penalty(const SelectionState& state, std::uint64_t sentence_length) {
  const double w_n = static_cast<double>(state.selected_total);
  const double w = static_cast<double>(sentence_length);
  return std::log((w_n + w) / w_n);
}

double gain(const SelectionState& state, const RepModel& rep, const SentenceProfile& profile) {
  double g = 0.0;
  // rep_counts is sorted by vocab index, which fixes the summation order.
  for (const auto& [index, count] : profile.rep_counts) {
    const std::uint64_t c_n = state.counts[index];
    g += rep.prob(index) * (log_count(c_n) - log_count(c_n + count));
  }
  return g;
}

double gain(const SelectionState& state, const RepModel& rep, const Sentence& sentence) {
  return gain(state, rep, compile_sentence(rep, sentence));
}

SentenceDelta delta_h(const SelectionState& state, const RepModel& rep,
                      const SentenceProfile& profile) {
  SentenceDelta d;
  d.penalty = penalty(state, profile.token_count);
  d.gain = gain(state, rep, profile);
  d.delta = d.penalty + d.gain;
  return d;
}

SentenceDelta delta_h(const SelectionState& state, const RepModel& rep,
                      const Sentence& sentence) {
  return delta_h(state, rep, compile_sentence(rep, sentence));
}

void apply_sentence(SelectionState& state, const SentenceProfile& profile, double delta) {
  for (const auto& [index, count] : profile.rep_counts) {
    state.counts[index] += count;
  }
  state.selected_total += profile.token_count;
  state.selected_tokens += profile.token_count;
  state.running_entropy += delta;
  ++state.steps;
}

SentenceDelta update_state(SelectionState& state, const RepModel& rep,
                           const Sentence& sentence) {
  const SentenceProfile profile = compile_sentence(rep, sentence);
  const SentenceDelta d = delta_h(state, rep, profile);
  apply_sentence(state, profile, d.delta);
  return d;
}

DocumentScore score_document(const SelectionState& state, const RepModel& rep,
                             const Document& doc) {
  if (doc.sentences.empty()) {
    throw Error("cannot score document " + std::to_string(doc.doc_id) + ": no sentences");
  }
  double sum = 0.0;
  for (const auto& sentence : doc.sentences) {
    sum += delta_h(state, rep, sentence).delta;
  }
  DocumentScore score;
  score.doc_id = doc.doc_id;
  score.sentence_count = doc.sentences.size();
  score.score = sum / static_cast<double>(doc.sentences.size());
  return score;
}

SelectionBudget SelectionBudget::from_fraction(double k) {
  if (!(k > 0.0) || k > 1.0) {
    throw InputError("budget fraction must be in (0, 1], got " + std::to_string(k));
  }
  SelectionBudget b;
  b.kind = Kind::Fraction;
  b.fraction = k;
  return b;
}

SelectionBudget SelectionBudget::from_tokens(std::uint64_t tokens) {
  if (tokens == 0) throw InputError("token budget must be positive");
  SelectionBudget b;
  b.kind = Kind::Tokens;
  b.tokens = tokens;
  return b;
}

const char* to_string(SelectionMode mode) {
  return mode == SelectionMode::Exact ? "exact" : "lazy";
}

std::uint64_t resolve_fraction_count(double fraction, std::uint64_t n) {
  // ceil(k*n), nudged so exact rationals (0.01 * 100) do not round up to
  // an extra document through binary representation error.
  const double raw = fraction * static_cast<double>(n);
  auto count = static_cast<std::uint64_t>(std::ceil(raw - 1e-9));
  if (count == 0) count = 1;
  return std::min(count, n);
}

namespace {

// A selectable unit: a whole document, or a single sentence when running
// sentence-level selection. Sentence bags live in one contiguous buffer;
// scoring walks it linearly.
struct Unit {
  std::uint64_t id = 0;
  std::uint64_t token_count = 0;
  std::vector<std::uint32_t> lengths;  // tokens per sentence
  std::vector<std::uint32_t> offsets;  // sentence slices of bag, size+1
  std::vector<std::pair<std::uint32_t, std::uint32_t>> bag;  // concatenated rep bags

  std::size_t sentence_count() const { return lengths.size(); }

  void add_sentence(const SentenceProfile& profile) {
    if (offsets.empty()) offsets.push_back(0);
    lengths.push_back(profile.token_count);
    bag.insert(bag.end(), profile.rep_counts.begin(), profile.rep_counts.end());
    offsets.push_back(static_cast<std::uint32_t>(bag.size()));
    token_count += profile.token_count;
  }
};

struct UnitScore {
  double score = 0.0;
  double penalty_sum = 0.0;
  double gain_sum = 0.0;
};

inline double gain_slice(const SelectionState& state, const RepModel& rep, const Unit& unit,
                         std::size_t sentence) {
  double g = 0.0;
  const auto* bag = unit.bag.data();
  for (std::uint32_t i = unit.offsets[sentence]; i < unit.offsets[sentence + 1]; ++i) {
    const std::uint64_t c_n = state.counts[bag[i].first];
    g += rep.prob(bag[i].first) * (log_count(c_n) - log_count(c_n + bag[i].second));
  }
  return g;
}

UnitScore score_unit(const SelectionState& state, const RepModel& rep, const Unit& unit) {
  UnitScore s;
  double delta_sum = 0.0;
  for (std::size_t i = 0; i < unit.sentence_count(); ++i) {
    const double p = penalty(state, unit.lengths[i]);
    const double g = gain_slice(state, rep, unit, i);
    s.penalty_sum += p;
    s.gain_sum += g;
    delta_sum += p + g;
  }
  s.score = delta_sum / static_cast<double>(unit.sentence_count());
  return s;
}

struct Candidate {
  double score = 0.0;
  std::uint64_t id = 0;
  std::size_t pos = 0;  // index into the unit vector

  bool better_than(const Candidate& other) const {
    return score < other.score || (score == other.score && id < other.id);
  }
};

// Runs fn(begin, end) over near-equal chunks of [0, n). Chunk results are
// combined by the caller in chunk order, so the thread count never changes
// the outcome.
template <typename Fn>
void for_chunks(std::size_t n, unsigned threads, Fn fn) {
  if (threads <= 1 || n < 2 * threads) {
    fn(0, std::size_t{0}, n);
    return;
  }
  const std::size_t chunk = (n + threads - 1) / threads;
  std::vector<std::thread> workers;
  for (unsigned t = 0; t < threads; ++t) {
    const std::size_t begin = t * chunk;
    if (begin >= n) break;
    const std::size_t end = std::min(n, begin + chunk);
    workers.emplace_back([=] { fn(t, begin, end); });
  }
  for (auto& w : workers) w.join();
}

struct AcceptedUnit {
  std::size_t pos = 0;
  UnitScore score;
  double h_after = 0.0;
};

struct BudgetSpec {
  std::uint64_t max_units = 0;   // 0 = unlimited
  std::uint64_t max_tokens = 0;  // 0 = unlimited
};

// Applies a unit sentence-by-sentence, recomputing every delta against the
// evolving state so the incremental H stays exact.
void apply_unit(SelectionState& state, const RepModel& rep, const Unit& unit) {
  for (std::size_t i = 0; i < unit.sentence_count(); ++i) {
    const double p = penalty(state, unit.lengths[i]);
    const double g = gain_slice(state, rep, unit, i);
    const double delta = p + g;
    for (std::uint32_t b = unit.offsets[i]; b < unit.offsets[i + 1]; ++b) {
      state.counts[unit.bag[b].first] += unit.bag[b].second;
    }
    state.selected_total += unit.lengths[i];
    state.selected_tokens += unit.lengths[i];
    state.running_entropy += delta;
    ++state.steps;
  }
}

std::vector<AcceptedUnit> greedy_exact(const std::vector<Unit>& units, const RepModel& rep,
                                       const BudgetSpec& budget, unsigned threads,
                                       SelectionState& state, std::vector<double>& trace) {
  std::vector<std::size_t> remaining(units.size());
  for (std::size_t i = 0; i < remaining.size(); ++i) remaining[i] = i;

  std::vector<AcceptedUnit> accepted;
  trace.push_back(state.running_entropy);
  while (!remaining.empty()) {
    if (budget.max_units && accepted.size() >= budget.max_units) break;
    if (budget.max_tokens && state.selected_tokens >= budget.max_tokens) break;

    std::vector<Candidate> chunk_best(threads > 1 ? threads : 1,
                                      Candidate{0.0, 0, remaining.size()});
    for_chunks(remaining.size(), threads,
               [&](std::size_t chunk_index, std::size_t begin, std::size_t end) {
                 Candidate best{0.0, 0, remaining.size()};
                 for (std::size_t r = begin; r < end; ++r) {
                   const Unit& unit = units[remaining[r]];
                   const Candidate c{score_unit(state, rep, unit).score, unit.id, r};
                   if (best.pos == remaining.size() || c.better_than(best)) best = c;
                 }
                 chunk_best[chunk_index] = best;
               });
    Candidate best{0.0, 0, remaining.size()};
    for (const Candidate& c : chunk_best) {
      if (c.pos == remaining.size()) continue;
      if (best.pos == remaining.size() || c.better_than(best)) best = c;
    }

    const std::size_t unit_pos = remaining[best.pos];
    const Unit& unit = units[unit_pos];
    const UnitScore score = score_unit(state, rep, unit);
    apply_unit(state, rep, unit);
    accepted.push_back({unit_pos, score, state.running_entropy});
    trace.push_back(state.running_entropy);
    remaining[best.pos] = remaining.back();
    remaining.pop_back();
  }
  return accepted;
}

// Lazy greedy around a priority queue of score lower bounds.
//
// The score of a unit splits into a penalty part (>= 0) and a gain part.
// Gains only move toward zero as counts grow, so a unit's gain computed
// against ANY past state stays a valid lower bound on its score under
// every future state. Each step pops and re-validates candidates until the
// queue's best bound cannot beat the best re-validated score, which makes
// the accepted unit (and the doc_id tie-break) identical to exact greedy.
std::vector<AcceptedUnit> greedy_lazy(const std::vector<Unit>& units, const RepModel& rep,
                                      const BudgetSpec& budget, unsigned threads,
                                      SelectionState& state, std::vector<double>& trace) {
  struct HeapEntry {
    double bound;  // gain-only lower bound from some past state
    std::uint64_t id;
    std::size_t pos;
  };
  struct Worse {
    bool operator()(const HeapEntry& a, const HeapEntry& b) const {
      return a.bound > b.bound || (a.bound == b.bound && a.id > b.id);
    }
  };
  std::priority_queue<HeapEntry, std::vector<HeapEntry>, Worse> heap;

  {
    std::vector<double> bounds(units.size());
    for_chunks(units.size(), threads, [&](std::size_t, std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        bounds[i] = score_unit(state, rep, units[i]).gain_sum /
                    static_cast<double>(units[i].sentence_count());
      }
    });
    for (std::size_t i = 0; i < units.size(); ++i) {
      heap.push({bounds[i], units[i].id, i});
    }
  }

  std::vector<AcceptedUnit> accepted;
  std::vector<std::pair<HeapEntry, UnitScore>> displaced;
  trace.push_back(state.running_entropy);
  while (!heap.empty()) {
    if (budget.max_units && accepted.size() >= budget.max_units) break;
    if (budget.max_tokens && state.selected_tokens >= budget.max_tokens) break;

    bool have_best = false;
    HeapEntry best_entry{};
    UnitScore best_score{};
    displaced.clear();
    while (!heap.empty()) {
      const HeapEntry& top = heap.top();
      if (have_best && (top.bound > best_score.score ||
                        (top.bound == best_score.score && top.id > best_entry.id))) {
        break;  // nothing left can beat or tie-break the current best
      }
      HeapEntry entry = heap.top();
      heap.pop();
      const UnitScore fresh = score_unit(state, rep, units[entry.pos]);
      if (!have_best || fresh.score < best_score.score ||
          (fresh.score == best_score.score && entry.id < best_entry.id)) {
        if (have_best) displaced.emplace_back(best_entry, best_score);
        best_entry = entry;
        best_score = fresh;
        have_best = true;
      } else {
        displaced.emplace_back(entry, fresh);
      }
    }
    for (auto& [entry, score] : displaced) {
      entry.bound =
          score.gain_sum / static_cast<double>(units[entry.pos].sentence_count());
      heap.push(entry);
    }

    apply_unit(state, rep, units[best_entry.pos]);
    accepted.push_back({best_entry.pos, best_score, state.running_entropy});
    trace.push_back(state.running_entropy);
  }
  return accepted;
}

BudgetSpec resolve_budget(const SelectionConfig& config, const std::vector<Unit>& units,
                          std::vector<std::string>& warnings) {
  BudgetSpec budget;
  if (config.budget.kind == SelectionBudget::Kind::Fraction) {
    budget.max_units = resolve_fraction_count(config.budget.fraction, units.size());
  } else {
    budget.max_tokens = config.budget.tokens;
    std::uint64_t available = 0;
    for (const auto& u : units) available += u.token_count;
    if (config.budget.tokens > available) {
      warnings.push_back("token budget " + std::to_string(config.budget.tokens) +
                         " exceeds corpus size " + std::to_string(available) +
                         "; selecting everything");
    }
  }
  return budget;
}

std::vector<AcceptedUnit> greedy_select(const std::vector<Unit>& units, const RepModel& rep,
                                        const BudgetSpec& budget, SelectionMode mode,
                                        unsigned threads, SelectionState& state,
                                        std::vector<double>& trace) {
  if (threads == 0) threads = 1;
  return mode == SelectionMode::Exact ? greedy_exact(units, rep, budget, threads, state, trace)
                                      : greedy_lazy(units, rep, budget, threads, state, trace);
}

ManifestHeader make_header(const SelectionConfig& config, const RepModel& rep) {
  ManifestHeader header;
  header.mode = to_string(config.mode);
  if (config.budget.kind == SelectionBudget::Kind::Fraction) {
    header.budget_kind = "fraction";
    header.budget_fraction = config.budget.fraction;
  } else {
    header.budget_kind = "tokens";
    header.budget_tokens = config.budget.tokens;
  }
  header.seed_mass = rep.size();
  header.tool_version = kToolVersion;
  return header;
}

}  // namespace

namespace {

SelectionResult select_documents_impl(const std::vector<Document>& corpus, const RepModel& rep,
                                      const SelectionConfig& config,
                                      const std::uint64_t* quota_override, unsigned threads) {
  if (corpus.empty()) throw InputError("cannot select from an empty corpus");

  std::vector<Unit> units;
  units.reserve(corpus.size());
  for (const auto& doc : corpus) {
    if (doc.sentences.empty()) {
      throw InputError("document " + std::to_string(doc.doc_id) + " has no sentences");
    }
    Unit unit;
    unit.id = doc.doc_id;
    for (const auto& sentence : doc.sentences) {
      unit.add_sentence(compile_sentence(rep, sentence));
    }
    units.push_back(std::move(unit));
  }

  SelectionResult result;
  SelectionState state = seed_state(rep);
  BudgetSpec budget;
  if (quota_override) {
    budget.max_units = *quota_override;
    if (budget.max_units == 0) {
      // Quota zero: empty selection, seed-only trace.
      result.h_trace.push_back(state.running_entropy);
      result.manifest.header = make_header(config, rep);
      return result;
    }
  } else {
    budget = resolve_budget(config, units, result.warnings);
  }
  const auto accepted =
      greedy_select(units, rep, budget, config.mode, threads, state, result.h_trace);

  result.manifest.header = make_header(config, rep);
  result.manifest.entries.reserve(accepted.size());
  for (std::size_t rank = 0; rank < accepted.size(); ++rank) {
    const auto& a = accepted[rank];
    const Document& doc = corpus[a.pos];
    ManifestEntry entry;
    entry.rank = rank;
    entry.doc_id = doc.doc_id;
    entry.domain = doc.domain;
    entry.score = a.score.score;
    entry.penalty_sum = a.score.penalty_sum;
    entry.gain_sum = a.score.gain_sum;
    entry.sentence_count = doc.sentences.size();
    entry.token_count = doc.token_count();
    entry.byte_size = doc.byte_size;
    entry.cumulative_entropy = a.h_after;
    entry.shard = 0;
    entry.shard_rank = rank;
    result.manifest.entries.push_back(std::move(entry));
  }
  return result;
}

}  // namespace

SelectionResult select_documents(const std::vector<Document>& corpus, const RepModel& rep,
                                 const SelectionConfig& config, unsigned threads) {
  return select_documents_impl(corpus, rep, config, nullptr, threads);
}

SelectionResult select_documents_with_quota(const std::vector<Document>& corpus,
                                            const RepModel& rep,
                                            const SelectionConfig& header_config,
                                            std::uint64_t quota, unsigned threads) {
  return select_documents_impl(corpus, rep, header_config, &quota, threads);
}

SentenceSelectionResult select_sentences(const std::vector<Sentence>& sentences,
                                         const RepModel& rep, const SelectionConfig& config,
                                         unsigned threads) {
  if (sentences.empty()) throw InputError("cannot select from an empty sentence list");

  std::vector<Unit> units;
  units.reserve(sentences.size());
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    Unit unit;
    unit.id = i;
    unit.add_sentence(compile_sentence(rep, sentences[i]));
    units.push_back(std::move(unit));
  }

  SentenceSelectionResult result;
  SelectionState state = seed_state(rep);
  const BudgetSpec budget = resolve_budget(config, units, result.warnings);
  const auto accepted =
      greedy_select(units, rep, budget, config.mode, threads, state, result.h_trace);

  result.picks.reserve(accepted.size());
  for (std::size_t rank = 0; rank < accepted.size(); ++rank) {
    const auto& a = accepted[rank];
    SentencePick pick;
    pick.rank = rank;
    pick.sentence_index = a.pos;
    pick.score = a.score.score;
    pick.penalty = a.score.penalty_sum;
    pick.gain = a.score.gain_sum;
    pick.token_count = units[a.pos].token_count;
    pick.cumulative_entropy = a.h_after;
    result.picks.push_back(pick);
  }
  return result;
}

SelectionResult random_select(const std::vector<Document>& corpus,
                              const SelectionBudget& budget, std::uint64_t seed) {
  if (corpus.empty()) throw InputError("cannot select from an empty corpus");

  std::vector<std::size_t> order(corpus.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(seed);

  std::vector<std::size_t> picked;
  SelectionResult result;
  if (budget.kind == SelectionBudget::Kind::Fraction) {
    const std::uint64_t want = resolve_fraction_count(budget.fraction, corpus.size());
    rng.sample_prefix(order, want);
    picked.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(want));
  } else {
    // Draw documents until the token budget is reached; the crossing
    // document is included, mirroring the greedy token-budget rule.
    std::uint64_t tokens = 0;
    std::size_t i = 0;
    for (; i < order.size() && tokens < budget.tokens; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng.bounded(order.size() - i));
      std::swap(order[i], order[j]);
      tokens += corpus[order[i]].token_count();
      picked.push_back(order[i]);
    }
    if (tokens < budget.tokens) {
      result.warnings.push_back("token budget " + std::to_string(budget.tokens) +
                                " exceeds corpus size " + std::to_string(tokens) +
                                "; selecting everything");
    }
  }

  result.manifest.header.mode = "random";
  if (budget.kind == SelectionBudget::Kind::Fraction) {
    result.manifest.header.budget_kind = "fraction";
    result.manifest.header.budget_fraction = budget.fraction;
  } else {
    result.manifest.header.budget_kind = "tokens";
    result.manifest.header.budget_tokens = budget.tokens;
  }
  result.manifest.header.rng_seed = seed;
  result.manifest.header.tool_version = kToolVersion;

  result.manifest.entries.reserve(picked.size());
  for (std::size_t rank = 0; rank < picked.size(); ++rank) {
    const Document& doc = corpus[picked[rank]];
    ManifestEntry entry;
    entry.rank = rank;
    entry.doc_id = doc.doc_id;
    entry.domain = doc.domain;
    entry.sentence_count = doc.sentences.size();
    entry.token_count = doc.token_count();
    entry.byte_size = doc.byte_size;
    entry.shard = 0;
    entry.shard_rank = rank;
    result.manifest.entries.push_back(std::move(entry));
  }
  return result;
}

}  // namespace cynsel
