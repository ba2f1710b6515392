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

#include <benchmark/benchmark.h>

#include "cynsel/rep_model.hpp"
#include "cynsel/selection.hpp"
#include "support/synthetic.hpp"

using namespace cynsel;
using namespace cynsel::testing;

namespace {

struct Fixture {
  RepModel rep;
  std::vector<Document> corpus;

  Fixture(std::size_t n_docs, std::size_t vocab_size)
      : rep(build_rep_model(make_rep_corpus(1, make_vocab("t", vocab_size)), 1)) {
    corpus = make_random_mixed_corpus(2, n_docs, make_vocab("t", vocab_size),
                                      make_vocab("o", vocab_size));
  }
};

}  // namespace

static void BM_DeltaH(benchmark::State& state) {
  const Fixture fix(1, static_cast<std::size_t>(state.range(0)));
  const auto sel = seed_state(fix.rep);
  const auto profile = compile_sentence(fix.rep, fix.corpus[0].sentences[0]);
  for (auto _ : state) {
    auto d = delta_h(sel, fix.rep, profile);
    benchmark::DoNotOptimize(d);
  }
}
BENCHMARK(BM_DeltaH)->Arg(100)->Arg(1000)->Arg(10000);

static void BM_ScoreDocument(benchmark::State& state) {
  const Fixture fix(64, 1000);
  const auto sel = seed_state(fix.rep);
  std::size_t i = 0;
  for (auto _ : state) {
    auto s = score_document(sel, fix.rep, fix.corpus[i]);
    benchmark::DoNotOptimize(s);
    i = (i + 1) % fix.corpus.size();
  }
}
BENCHMARK(BM_ScoreDocument);

static void BM_SelectExact(benchmark::State& state) {
  const Fixture fix(static_cast<std::size_t>(state.range(0)), 500);
  const SelectionConfig config{SelectionBudget::from_fraction(0.05), SelectionMode::Exact};
  for (auto _ : state) {
    auto result = select_documents(fix.corpus, fix.rep, config);
    benchmark::DoNotOptimize(result);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SelectExact)->Arg(500)->Arg(2000)->Arg(8000)->Unit(benchmark::kMillisecond);

static void BM_SelectLazy(benchmark::State& state) {
  const Fixture fix(static_cast<std::size_t>(state.range(0)), 500);
  const SelectionConfig config{SelectionBudget::from_fraction(0.05), SelectionMode::Lazy};
  for (auto _ : state) {
    auto result = select_documents(fix.corpus, fix.rep, config);
    benchmark::DoNotOptimize(result);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SelectLazy)->Arg(500)->Arg(2000)->Arg(8000)->Arg(32000)
    ->Unit(benchmark::kMillisecond);

static void BM_SelectExactThreads(benchmark::State& state) {
  const Fixture fix(8000, 500);
  const SelectionConfig config{SelectionBudget::from_fraction(0.05), SelectionMode::Exact};
  for (auto _ : state) {
    auto result =
        select_documents(fix.corpus, fix.rep, config, static_cast<unsigned>(state.range(0)));
    benchmark::DoNotOptimize(result);
  }
}
BENCHMARK(BM_SelectExactThreads)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
