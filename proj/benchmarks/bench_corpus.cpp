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

#include <filesystem>
#include <string>

#include "cynsel/corpus.hpp"
#include "cynsel/evaluation.hpp"
#include "cynsel/rep_model.hpp"
#include "support/synthetic.hpp"

using namespace cynsel;
using namespace cynsel::testing;

namespace {

std::string sample_text() {
  Rng rng(3);
  const auto vocab = make_vocab("word", 2000);
  const ZipfSampler sampler(vocab);
  std::string text;
  while (text.size() < 1 << 20) {
    for (int t = 0; t < 12; ++t) {
      if (!text.empty()) text += ' ';
      text += sampler.draw(rng);
    }
    text += rng.unit() < 0.3 ? "\n" : ". ";
  }
  return text;
}

}  // namespace

static void BM_Tokenize(benchmark::State& state) {
  const std::string text = sample_text();
  for (auto _ : state) {
    auto tokens = tokenize(text, true);
    benchmark::DoNotOptimize(tokens);
  }
  state.SetBytesProcessed(state.iterations() * static_cast<int64_t>(text.size()));
}
BENCHMARK(BM_Tokenize);

static void BM_SplitSentences(benchmark::State& state) {
  const std::string text = sample_text();
  for (auto _ : state) {
    auto segments = split_sentences(text);
    benchmark::DoNotOptimize(segments);
  }
  state.SetBytesProcessed(state.iterations() * static_cast<int64_t>(text.size()));
}
BENCHMARK(BM_SplitSentences);

static void BM_IngestJsonl(benchmark::State& state) {
  namespace fs = std::filesystem;
  const fs::path path = fs::temp_directory_path() / "cynsel-bench-ingest.jsonl";
  write_jsonl(path.string(),
              make_random_mixed_corpus(5, 5000, make_vocab("t", 500), make_vocab("o", 500)));
  const auto bytes = static_cast<int64_t>(fs::file_size(path));
  for (auto _ : state) {
    auto docs = read_corpus(path.string(), {});
    benchmark::DoNotOptimize(docs);
  }
  state.SetBytesProcessed(state.iterations() * bytes);
  fs::remove(path);
}
BENCHMARK(BM_IngestJsonl);

static void BM_UnigramPpl(benchmark::State& state) {
  const auto vocab = make_vocab("t", 2000);
  const auto train = make_rep_corpus(7, vocab, 500);
  const auto target = make_rep_corpus(8, vocab, 100);
  const auto counts = count_tokens(train);
  std::uint64_t target_tokens = 0;
  for (const auto& d : target) target_tokens += d.token_count();
  for (auto _ : state) {
    const double ppl = unigram_ppl(counts, target);
    benchmark::DoNotOptimize(ppl);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(target_tokens));
}
BENCHMARK(BM_UnigramPpl);
