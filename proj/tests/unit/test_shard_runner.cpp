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
#include <set>

#include "cynsel/manifest.hpp"
#include "cynsel/shard.hpp"
#include "support/synthetic.hpp"

using cynsel::Document;
using cynsel::plan_shards;
using cynsel::RepModel;
using cynsel::run_sharded;
using cynsel::select_documents;
using cynsel::SelectionBudget;
using cynsel::SelectionConfig;
using cynsel::SelectionMode;
using cynsel::ShardPlan;

namespace {

SelectionConfig exact_k(double k) {
  return SelectionConfig{SelectionBudget::from_fraction(k), SelectionMode::Exact};
}

struct TwoDomainFixture {
  RepModel rep;
  std::vector<Document> corpus;

  explicit TwoDomainFixture(std::uint64_t seed, std::size_t n_docs) :
      rep(cynsel::build_rep_model(
          cynsel::testing::make_rep_corpus(seed, cynsel::testing::make_vocab("t", 60)), 1)) {
    corpus = cynsel::testing::make_two_domain_corpus(
        seed + 1, n_docs, cynsel::testing::make_vocab("t", 60),
        cynsel::testing::make_vocab("o", 80));
  }
};

double domain_fraction(const cynsel::SelectionManifest& manifest, const std::string& tag) {
  std::size_t n = 0;
  for (const auto& e : manifest.entries) {
    if (e.domain == tag) ++n;
  }
  return static_cast<double>(n) / static_cast<double>(manifest.entries.size());
}

}  // namespace

TEST_CASE("plan_shards: contiguous near-equal ranges") {
  const auto even = plan_shards(10, 2, 0.5);
  CHECK(even.offsets == std::vector<std::uint64_t>{0, 5, 10});

  const auto uneven = plan_shards(10, 3, 0.5);
  CHECK(uneven.offsets == std::vector<std::uint64_t>{0, 4, 7, 10});
  CHECK(uneven.shard_size(0) == 4);
  CHECK(uneven.shard_size(1) == 3);
  CHECK(uneven.shard_size(2) == 3);

  const auto identity = plan_shards(10, 1, 0.5);
  CHECK(identity.offsets == std::vector<std::uint64_t>{0, 10});
  CHECK(identity.quotas == std::vector<std::uint64_t>{5});
}

TEST_CASE("plan_shards: quotas conserve the global budget") {
  for (const std::uint64_t n : {10ull, 199ull, 1000ull}) {
    for (const std::uint32_t shards : {1u, 3u, 7u}) {
      for (const double k : {0.1, 0.25, 1.0}) {
        const auto plan = plan_shards(n, shards, k);
        std::uint64_t total = 0;
        for (std::uint32_t s = 0; s < shards; ++s) {
          CHECK(plan.quotas[s] <= plan.shard_size(s));
          total += plan.quotas[s];
        }
        CHECK(total == cynsel::resolve_fraction_count(k, n));
      }
    }
  }
}

TEST_CASE("plan_shards: shard_of maps positions to their range") {
  const auto plan = plan_shards(10, 3, 0.5);
  CHECK(plan.shard_of(0) == 0);
  CHECK(plan.shard_of(3) == 0);
  CHECK(plan.shard_of(4) == 1);
  CHECK(plan.shard_of(9) == 2);
}

TEST_CASE("plan_shards: error cases") {
  CHECK_THROWS_AS(plan_shards(10, 0, 0.5), cynsel::InputError);
  CHECK_THROWS_AS(plan_shards(10, 11, 0.5), cynsel::InputError);
  CHECK_THROWS_AS(plan_shards(10, 2, 0.0), cynsel::InputError);
}

TEST_CASE("run_sharded: one shard is bit-identical to unsharded selection") {
  TwoDomainFixture fix(70, 60);
  const auto unsharded = select_documents(fix.corpus, fix.rep, exact_k(0.2));
  const auto plan = plan_shards(fix.corpus.size(), 1, 0.2);
  const auto sharded = run_sharded(fix.corpus, fix.rep, exact_k(0.2), plan);
  CHECK(cynsel::manifest_to_string(sharded.merged) ==
        cynsel::manifest_to_string(unsharded.manifest));
  CHECK(sharded.per_shard_traces[0] == unsharded.h_trace);
}

TEST_CASE("run_sharded: identical documents select the earliest ids per shard") {
  TwoDomainFixture fix(71, 4);
  // Clone one document everywhere; only ids differ.
  std::vector<Document> corpus;
  for (std::size_t i = 0; i < 12; ++i) {
    Document d = fix.corpus[0];
    d.doc_id = i;
    corpus.push_back(std::move(d));
  }
  const auto plan = plan_shards(corpus.size(), 2, 0.5);
  const auto result = run_sharded(corpus, fix.rep, exact_k(0.5), plan);
  std::set<std::uint64_t> ids;
  for (const auto& e : result.merged.entries) ids.insert(e.doc_id);
  // Each shard holds ids 0..5 and 6..11; k=50% takes the three earliest of each.
  CHECK(ids == std::set<std::uint64_t>{0, 1, 2, 6, 7, 8});
}

TEST_CASE("run_sharded: membership soundness and budget conservation") {
  TwoDomainFixture fix(72, 101);
  const auto plan = plan_shards(fix.corpus.size(), 4, 0.13);
  const auto result = run_sharded(fix.corpus, fix.rep, exact_k(0.13), plan, 4);

  std::uint64_t per_shard_total = 0;
  for (std::uint32_t s = 0; s < plan.num_shards; ++s) {
    CHECK(result.per_shard[s].entries.size() == plan.quotas[s]);
    per_shard_total += result.per_shard[s].entries.size();
  }
  CHECK(result.merged.entries.size() == per_shard_total);
  CHECK(result.merged.entries.size() == cynsel::resolve_fraction_count(0.13, 101));

  // Every merged entry appears in exactly one shard manifest at a rank
  // below that shard's quota.
  for (const auto& entry : result.merged.entries) {
    std::size_t appearances = 0;
    for (std::uint32_t s = 0; s < plan.num_shards; ++s) {
      for (const auto& se : result.per_shard[s].entries) {
        if (se.doc_id == entry.doc_id) {
          ++appearances;
          CHECK(se.shard == s);
          CHECK(se.shard_rank < plan.quotas[s]);
        }
      }
    }
    CHECK(appearances == 1);
  }

  // Merged order is by ascending score.
  for (std::size_t i = 1; i < result.merged.entries.size(); ++i) {
    CHECK(*result.merged.entries[i - 1].score <= *result.merged.entries[i].score);
  }
  CHECK(result.merged.header.order_note.has_value());
  CHECK(result.merged.header.shards == 4);
}

TEST_CASE("run_sharded: isolation - a shard alone equals the shard within the run") {
  TwoDomainFixture fix(73, 40);
  const auto plan = plan_shards(fix.corpus.size(), 2, 0.2);
  const auto result = run_sharded(fix.corpus, fix.rep, exact_k(0.2), plan);

  const std::vector<Document> slice(fix.corpus.begin() + plan.offsets[1],
                                    fix.corpus.begin() + plan.offsets[2]);
  const auto solo =
      cynsel::select_documents_with_quota(slice, fix.rep, exact_k(0.2), plan.quotas[1]);
  REQUIRE(solo.manifest.entries.size() == result.per_shard[1].entries.size());
  for (std::size_t i = 0; i < solo.manifest.entries.size(); ++i) {
    CHECK(solo.manifest.entries[i].doc_id == result.per_shard[1].entries[i].doc_id);
    CHECK(solo.manifest.entries[i].score == result.per_shard[1].entries[i].score);
  }
}

TEST_CASE("run_sharded: thread count does not change the result") {
  TwoDomainFixture fix(74, 80);
  const auto plan = plan_shards(fix.corpus.size(), 4, 0.1);
  const auto serial = run_sharded(fix.corpus, fix.rep, exact_k(0.1), plan, 1);
  const auto parallel = run_sharded(fix.corpus, fix.rep, exact_k(0.1), plan, 8);
  CHECK(cynsel::manifest_to_string(serial.merged) ==
        cynsel::manifest_to_string(parallel.merged));
}

TEST_CASE("run_sharded: two-domain purity within 5 points of unsharded") {
  TwoDomainFixture fix(75, 200);
  const auto unsharded = select_documents(fix.corpus, fix.rep, exact_k(0.1));
  const auto plan = plan_shards(fix.corpus.size(), 4, 0.1);
  const auto sharded = run_sharded(fix.corpus, fix.rep, exact_k(0.1), plan, 4);
  const double pure_unsharded = domain_fraction(unsharded.manifest, "target");
  const double pure_sharded = domain_fraction(sharded.merged, "target");
  CHECK(std::abs(pure_unsharded - pure_sharded) <= 0.05);
}

TEST_CASE("run_sharded: token budgets cannot shard") {
  TwoDomainFixture fix(76, 20);
  const auto plan = plan_shards(fix.corpus.size(), 2, 0.5);
  SelectionConfig config;
  config.budget = SelectionBudget::from_tokens(100);
  CHECK_THROWS_AS(run_sharded(fix.corpus, fix.rep, config, plan), cynsel::InputError);
}

TEST_CASE("run_sharded: shard failures carry the shard index") {
  TwoDomainFixture fix(77, 10);
  // Poison one document inside shard 1 so its selection throws.
  auto corpus = fix.corpus;
  corpus[7].sentences.clear();
  const auto plan = plan_shards(corpus.size(), 2, 0.5);
  CHECK_THROWS_WITH_AS(run_sharded(corpus, fix.rep, exact_k(0.5), plan),
                       doctest::Contains("shard 1"), cynsel::Error);
}

TEST_CASE("merge_shard_manifests: empty input is an error") {
  CHECK_THROWS_AS(cynsel::merge_shard_manifests({}), cynsel::InputError);
}

TEST_CASE("shard_manifest_filename: zero-padded") {
  CHECK(cynsel::shard_manifest_filename(0) == "shard-0000.jsonl");
  CHECK(cynsel::shard_manifest_filename(123) == "shard-0123.jsonl");
}
