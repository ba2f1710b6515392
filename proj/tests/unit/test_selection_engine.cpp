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

#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "cynsel/selection.hpp"
#include "support/oracle.hpp"
#include "support/synthetic.hpp"

using cynsel::Document;
using cynsel::RepModel;
using cynsel::resolve_fraction_count;
using cynsel::select_documents;
using cynsel::select_sentences;
using cynsel::SelectionBudget;
using cynsel::SelectionConfig;
using cynsel::SelectionMode;
using cynsel::Sentence;
using cynsel::random_select;

namespace {

SelectionConfig exact_k(double k) {
  return SelectionConfig{SelectionBudget::from_fraction(k), SelectionMode::Exact};
}

RepModel small_rep(std::uint64_t seed, std::size_t vocab_size = 60) {
  const auto vocab = cynsel::testing::make_vocab("t", vocab_size);
  return cynsel::build_rep_model(cynsel::testing::make_rep_corpus(seed, vocab), 1);
}

std::vector<Document> small_corpus(std::uint64_t seed, std::size_t n_docs = 40) {
  const auto target_vocab = cynsel::testing::make_vocab("t", 60);
  const auto off_vocab = cynsel::testing::make_vocab("o", 80);
  return cynsel::testing::make_random_mixed_corpus(seed, n_docs, target_vocab, off_vocab);
}

}  // namespace

TEST_CASE("resolve_fraction_count: exact rationals do not round up") {
  CHECK(resolve_fraction_count(0.01, 100) == 1);
  CHECK(resolve_fraction_count(0.005, 10000) == 50);
  CHECK(resolve_fraction_count(1.0, 17) == 17);
  CHECK(resolve_fraction_count(0.0051, 1000) == 6);  // genuine ceil
  CHECK(resolve_fraction_count(0.001, 100) == 1);    // never zero
}

TEST_CASE("select_documents: single document, any budget") {
  const auto rep = small_rep(1);
  auto corpus = small_corpus(2, 1);
  const auto result = select_documents(corpus, rep, exact_k(1.0));
  REQUIRE(result.manifest.entries.size() == 1);
  CHECK(result.manifest.entries[0].rank == 0);
  CHECK(result.manifest.entries[0].doc_id == corpus[0].doc_id);
  CHECK(result.h_trace.size() == 2);
}

TEST_CASE("select_documents: identical documents tie-break by doc_id") {
  const auto rep = small_rep(1);
  auto corpus = small_corpus(3, 1);
  Document twin = corpus[0];
  twin.doc_id = 7;
  corpus[0].doc_id = 11;
  corpus.push_back(twin);
  const auto result = select_documents(corpus, rep, exact_k(0.5));
  REQUIRE(result.manifest.entries.size() == 1);
  CHECK(result.manifest.entries[0].doc_id == 7);
}

TEST_CASE("select_documents: oracle equivalence on a two-population corpus") {
  const auto target_vocab = cynsel::testing::make_vocab("t", 50);
  const auto off_vocab = cynsel::testing::make_vocab("o", 50);
  const auto rep =
      cynsel::build_rep_model(cynsel::testing::make_rep_corpus(31, target_vocab), 1);
  // 25 docs from the rep vocabulary, 25 from a disjoint one.
  auto corpus = cynsel::testing::make_two_domain_corpus(32, 50, target_vocab, off_vocab);

  const auto result = select_documents(corpus, rep, exact_k(0.2));
  const auto oracle = cynsel::testing::oracle_select_documents(corpus, rep, 10);

  REQUIRE(result.manifest.entries.size() == oracle.doc_ids.size());
  for (std::size_t i = 0; i < oracle.doc_ids.size(); ++i) {
    CHECK(result.manifest.entries[i].doc_id == oracle.doc_ids[i]);
    CHECK(std::abs(*result.manifest.entries[i].score - oracle.scores[i]) <= 1e-9);
    CHECK(std::abs(*result.manifest.entries[i].cumulative_entropy - oracle.h_after[i]) <=
          1e-9 * std::max(1.0, std::abs(oracle.h_after[i])));
  }
}

TEST_CASE("select_documents: greedy accepts the per-step minimum") {
  const auto rep = small_rep(4);
  auto corpus = small_corpus(5, 30);
  const auto result = select_documents(corpus, rep, exact_k(0.4));

  // Replay: at each step the accepted score must be <= every remaining
  // document's score under the state at that step.
  auto state = cynsel::seed_state(rep);
  std::vector<bool> taken(corpus.size(), false);
  for (const auto& entry : result.manifest.entries) {
    std::size_t pos = corpus.size();
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      if (!taken[i] && corpus[i].doc_id == entry.doc_id) pos = i;
    }
    REQUIRE(pos != corpus.size());
    const double accepted_score = cynsel::score_document(state, rep, corpus[pos]).score;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      if (taken[i] || i == pos) continue;
      CHECK(accepted_score <= cynsel::score_document(state, rep, corpus[i]).score);
    }
    taken[pos] = true;
    for (const auto& s : corpus[pos].sentences) cynsel::update_state(state, rep, s);
  }
}

TEST_CASE("select_documents: budget over corpus size selects everything with a warning") {
  const auto rep = small_rep(6);
  auto corpus = small_corpus(7, 10);
  std::uint64_t total_tokens = 0;
  for (const auto& d : corpus) total_tokens += d.token_count();

  SelectionConfig config;
  config.budget = SelectionBudget::from_tokens(total_tokens * 3);
  const auto result = select_documents(corpus, rep, config);
  CHECK(result.manifest.entries.size() == corpus.size());
  REQUIRE(result.warnings.size() == 1);
  CHECK(result.warnings[0].find("exceeds corpus size") != std::string::npos);
}

TEST_CASE("select_documents: token budget includes the crossing document") {
  const auto rep = small_rep(8);
  auto corpus = small_corpus(9, 20);
  SelectionConfig config;
  config.budget = SelectionBudget::from_tokens(25);
  const auto result = select_documents(corpus, rep, config);
  std::uint64_t tokens = 0;
  for (const auto& e : result.manifest.entries) tokens += e.token_count;
  CHECK(tokens >= 25);
  // Dropping the last document would leave the budget unmet.
  CHECK(tokens - result.manifest.entries.back().token_count < 25);
}

TEST_CASE("select_documents: empty corpus is an error") {
  const auto rep = small_rep(1);
  CHECK_THROWS_AS(select_documents({}, rep, exact_k(0.5)), cynsel::InputError);
}

TEST_CASE("select_documents: prefix property across budgets") {
  const auto rep = small_rep(10);
  auto corpus = small_corpus(11, 60);
  const auto small = select_documents(corpus, rep, exact_k(0.1));
  const auto large = select_documents(corpus, rep, exact_k(0.4));
  REQUIRE(small.manifest.entries.size() < large.manifest.entries.size());
  for (std::size_t i = 0; i < small.manifest.entries.size(); ++i) {
    CHECK(small.manifest.entries[i] == large.manifest.entries[i]);
  }
}

TEST_CASE("select_documents: input order invariance") {
  const auto rep = small_rep(12);
  auto corpus = small_corpus(13, 30);
  const auto forward = select_documents(corpus, rep, exact_k(0.3));
  std::reverse(corpus.begin(), corpus.end());
  const auto reversed = select_documents(corpus, rep, exact_k(0.3));
  CHECK(forward.manifest.entries == reversed.manifest.entries);
  CHECK(forward.h_trace == reversed.h_trace);
}

TEST_CASE("select_documents: scoring parallelism does not change output") {
  const auto rep = small_rep(14);
  auto corpus = small_corpus(15, 50);
  const auto serial = select_documents(corpus, rep, exact_k(0.2), 1);
  const auto parallel = select_documents(corpus, rep, exact_k(0.2), 4);
  CHECK(serial.manifest.entries == parallel.manifest.entries);
  CHECK(serial.h_trace == parallel.h_trace);

  SelectionConfig lazy{SelectionBudget::from_fraction(0.2), SelectionMode::Lazy};
  const auto lazy1 = select_documents(corpus, rep, lazy, 1);
  const auto lazy4 = select_documents(corpus, rep, lazy, 4);
  CHECK(lazy1.manifest.entries == lazy4.manifest.entries);
}

TEST_CASE("select_documents: lazy matches exact on small instances") {
  for (const std::uint64_t seed : {20ull, 21ull, 22ull}) {
    const auto rep = small_rep(seed);
    auto corpus = small_corpus(seed + 100, 80);
    const auto exact = select_documents(corpus, rep, exact_k(0.25));
    SelectionConfig lazy{SelectionBudget::from_fraction(0.25), SelectionMode::Lazy};
    const auto approx = select_documents(corpus, rep, lazy);
    REQUIRE(exact.manifest.entries.size() == approx.manifest.entries.size());
    for (std::size_t i = 0; i < exact.manifest.entries.size(); ++i) {
      CHECK(exact.manifest.entries[i].doc_id == approx.manifest.entries[i].doc_id);
      CHECK(*exact.manifest.entries[i].score ==
            doctest::Approx(*approx.manifest.entries[i].score).epsilon(1e-12));
    }
    CHECK(exact.manifest.header.mode == "exact");
    CHECK(approx.manifest.header.mode == "lazy");
  }
}

TEST_CASE("select_sentences: single sentence gives a two-point trace") {
  const auto rep = small_rep(1);
  std::vector<Sentence> pool = {Sentence{{"t0001", "t0002"}}};
  const auto result = select_sentences(pool, rep, exact_k(1.0));
  REQUIRE(result.picks.size() == 1);
  CHECK(result.picks[0].sentence_index == 0);
  REQUIRE(result.h_trace.size() == 2);
  CHECK(result.h_trace[1] == doctest::Approx(result.picks[0].cumulative_entropy));
}

TEST_CASE("select_sentences: shorter of two equal-content candidates wins") {
  const auto rep = small_rep(2);
  // Same rep-vocabulary content, different length: gains are equal and the
  // penalty is monotone in length.
  std::vector<Sentence> pool = {Sentence{{"t0001", "pad", "pad", "pad"}},
                                Sentence{{"t0001"}}};
  const auto result = select_sentences(pool, rep, exact_k(0.5));
  REQUIRE(result.picks.size() == 1);
  CHECK(result.picks[0].sentence_index == 1);
}

TEST_CASE("select_sentences: oracle equivalence on a 100-sentence instance") {
  const auto target_vocab = cynsel::testing::make_vocab("t", 40);
  const auto off_vocab = cynsel::testing::make_vocab("o", 40);
  const auto rep =
      cynsel::build_rep_model(cynsel::testing::make_rep_corpus(41, target_vocab), 1);
  const auto docs =
      cynsel::testing::make_random_mixed_corpus(42, 25, target_vocab, off_vocab, 4, 8);
  std::vector<Sentence> pool;
  for (const auto& d : docs) {
    pool.insert(pool.end(), d.sentences.begin(), d.sentences.end());
  }
  pool.resize(std::min<std::size_t>(pool.size(), 100));

  const auto result = select_sentences(pool, rep, exact_k(0.3));
  const auto oracle =
      cynsel::testing::oracle_select_sentences(pool, rep, result.picks.size());
  REQUIRE(result.picks.size() == oracle.doc_ids.size());
  for (std::size_t i = 0; i < oracle.doc_ids.size(); ++i) {
    CHECK(result.picks[i].sentence_index == oracle.doc_ids[i]);
    CHECK(std::abs(result.picks[i].score - oracle.scores[i]) <= 1e-9);
  }
}

TEST_CASE("random_select: fraction budget draws the resolved count") {
  auto corpus = small_corpus(50, 40);
  const auto result = random_select(corpus, SelectionBudget::from_fraction(0.25), 77);
  CHECK(result.manifest.entries.size() == 10);
  CHECK(result.manifest.header.mode == "random");
  CHECK(result.manifest.header.rng_seed == 77);
  for (const auto& entry : result.manifest.entries) {
    CHECK(!entry.score.has_value());
    CHECK(!entry.cumulative_entropy.has_value());
  }
}

TEST_CASE("random_select: k = 1 selects everything; fixed seed repeats") {
  auto corpus = small_corpus(51, 23);
  const auto all = random_select(corpus, SelectionBudget::from_fraction(1.0), 5);
  CHECK(all.manifest.entries.size() == corpus.size());

  const auto a = random_select(corpus, SelectionBudget::from_fraction(0.4), 123);
  const auto b = random_select(corpus, SelectionBudget::from_fraction(0.4), 123);
  CHECK(a.manifest.entries == b.manifest.entries);
  const auto c = random_select(corpus, SelectionBudget::from_fraction(0.4), 124);
  CHECK(a.manifest.entries != c.manifest.entries);
}

TEST_CASE("random_select: domain fractions track corpus fractions (3-sigma binomial)") {
  const auto target_vocab = cynsel::testing::make_vocab("t", 30);
  const auto off_vocab = cynsel::testing::make_vocab("o", 30);
  // 10k docs, alternating domains -> corpus fraction 0.5 per domain.
  auto corpus = cynsel::testing::make_two_domain_corpus(60, 10000, target_vocab, off_vocab);
  const auto result = random_select(corpus, SelectionBudget::from_fraction(0.1), 9);
  std::size_t target_count = 0;
  for (const auto& e : result.manifest.entries) {
    if (e.domain == "target") ++target_count;
  }
  const double n = static_cast<double>(result.manifest.entries.size());
  const double p = 0.5;
  const double sigma = std::sqrt(n * p * (1.0 - p));
  CHECK(std::abs(static_cast<double>(target_count) - n * p) <= 3.0 * sigma);
}

TEST_CASE("random_select: token budget stops at the crossing document") {
  auto corpus = small_corpus(52, 30);
  const auto result = random_select(corpus, SelectionBudget::from_tokens(40), 3);
  std::uint64_t tokens = 0;
  for (const auto& e : result.manifest.entries) tokens += e.token_count;
  CHECK(tokens >= 40);
  CHECK(tokens - result.manifest.entries.back().token_count < 40);
}
