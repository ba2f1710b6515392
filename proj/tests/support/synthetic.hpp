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
//
// Deterministic synthetic corpora for tests and benchmarks.

#ifndef CYNSEL_TESTS_SUPPORT_SYNTHETIC_HPP_
#define CYNSEL_TESTS_SUPPORT_SYNTHETIC_HPP_

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "cynsel/corpus.hpp"
#include "cynsel/rng.hpp"

namespace cynsel::testing {

inline std::vector<std::string> make_vocab(const std::string& prefix, std::size_t n) {
  std::vector<std::string> vocab;
  vocab.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%s%04zu", prefix.c_str(), i);
    vocab.emplace_back(buf);
  }
  return vocab;
}

// Draws words with weight proportional to 1/(rank+1), a crude Zipf shape.
class ZipfSampler {
 public:
  explicit ZipfSampler(const std::vector<std::string>& vocab) : vocab_(&vocab) {
    cumulative_.reserve(vocab.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < vocab.size(); ++i) {
      sum += 1.0 / static_cast<double>(i + 1);
      cumulative_.push_back(sum);
    }
  }

  const std::string& draw(Rng& rng) const {
    const double u = rng.unit() * cumulative_.back();
    std::size_t lo = 0;
    std::size_t hi = cumulative_.size() - 1;
    while (lo < hi) {
      const std::size_t mid = (lo + hi) / 2;
      if (cumulative_[mid] < u) {
        lo = mid + 1;
      } else {
        hi = mid;
      }
    }
    return (*vocab_)[lo];
  }

 private:
  const std::vector<std::string>* vocab_;
  std::vector<double> cumulative_;
};

inline Sentence make_sentence(Rng& rng, const ZipfSampler& sampler, std::size_t len) {
  Sentence s;
  s.tokens.reserve(len);
  for (std::size_t i = 0; i < len; ++i) s.tokens.push_back(sampler.draw(rng));
  return s;
}

// Reconstructs a plausible raw text for a token document: sentences joined
// by ". " so re-ingestion splits and tokenizes back to the same tokens.
inline std::string doc_to_text(const Document& doc) {
  std::string text;
  for (std::size_t i = 0; i < doc.sentences.size(); ++i) {
    if (i > 0) text += ' ';
    const auto& tokens = doc.sentences[i].tokens;
    for (std::size_t t = 0; t < tokens.size(); ++t) {
      if (t > 0) text += ' ';
      text += tokens[t];
    }
    text += '.';
  }
  return text;
}

inline Document finish_doc(std::uint64_t id, std::vector<Sentence> sentences,
                           std::optional<std::string> domain) {
  Document doc;
  doc.doc_id = id;
  doc.domain = std::move(domain);
  doc.sentences = std::move(sentences);
  doc.byte_size = doc_to_text(doc).size();
  return doc;
}

// A representative corpus drawn from the target vocabulary.
inline std::vector<Document> make_rep_corpus(std::uint64_t seed,
                                             const std::vector<std::string>& vocab,
                                             std::size_t n_docs = 50,
                                             std::size_t sentences_per_doc = 4,
                                             std::size_t sentence_len = 8) {
  Rng rng(seed);
  const ZipfSampler sampler(vocab);
  std::vector<Document> docs;
  docs.reserve(n_docs);
  for (std::size_t d = 0; d < n_docs; ++d) {
    std::vector<Sentence> sentences;
    for (std::size_t s = 0; s < sentences_per_doc; ++s) {
      sentences.push_back(make_sentence(rng, sampler, 1 + rng.bounded(sentence_len)));
    }
    docs.push_back(finish_doc(d, std::move(sentences), std::nullopt));
  }
  return docs;
}

// Randomized corpus mixing target and off-domain vocabulary per sentence;
// used by the oracle-equivalence suites. Small vocab, varied content.
inline std::vector<Document> make_random_mixed_corpus(std::uint64_t seed, std::size_t n_docs,
                                                      const std::vector<std::string>& target_vocab,
                                                      const std::vector<std::string>& off_vocab,
                                                      std::size_t max_sentences = 5,
                                                      std::size_t max_len = 10) {
  Rng rng(seed);
  const ZipfSampler target(target_vocab);
  const ZipfSampler off(off_vocab);
  std::vector<Document> docs;
  docs.reserve(n_docs);
  for (std::size_t d = 0; d < n_docs; ++d) {
    const double mix = rng.unit();  // per-document target-vocab affinity
    std::vector<Sentence> sentences;
    const std::size_t n_sentences = 1 + rng.bounded(max_sentences);
    for (std::size_t s = 0; s < n_sentences; ++s) {
      Sentence sent;
      const std::size_t len = 1 + rng.bounded(max_len);
      for (std::size_t t = 0; t < len; ++t) {
        sent.tokens.push_back(rng.unit() < mix ? target.draw(rng) : off.draw(rng));
      }
      sentences.push_back(std::move(sent));
    }
    docs.push_back(finish_doc(d, std::move(sentences), std::nullopt));
  }
  return docs;
}

// Two-domain corpus: "target" documents draw only from the target
// vocabulary, "offdomain" only from a disjoint one. Domains alternate by
// doc id so contiguous shards see both.
inline std::vector<Document> make_two_domain_corpus(std::uint64_t seed, std::size_t n_docs,
                                                    const std::vector<std::string>& target_vocab,
                                                    const std::vector<std::string>& off_vocab,
                                                    std::size_t max_sentences = 3,
                                                    std::size_t max_len = 9) {
  Rng rng(seed);
  const ZipfSampler target(target_vocab);
  const ZipfSampler off(off_vocab);
  std::vector<Document> docs;
  docs.reserve(n_docs);
  for (std::size_t d = 0; d < n_docs; ++d) {
    const bool is_target = (d % 2) == 0;
    const ZipfSampler& sampler = is_target ? target : off;
    std::vector<Sentence> sentences;
    const std::size_t n_sentences = 1 + rng.bounded(max_sentences);
    for (std::size_t s = 0; s < n_sentences; ++s) {
      sentences.push_back(make_sentence(rng, sampler, 2 + rng.bounded(max_len)));
    }
    docs.push_back(finish_doc(d, std::move(sentences),
                              is_target ? std::string("target") : std::string("offdomain")));
  }
  return docs;
}

// Corpus where every `good_every`-th document is strongly target-like and
// the rest carry only a faint target admixture. Good documents land
// round-robin across contiguous blocks, the regime the sharding shortcut
// assumes: clearly good documents are rare, obvious, and chosen early in
// whichever shard they fall into.
inline std::vector<Document> make_graded_corpus(std::uint64_t seed, std::size_t n_docs,
                                                const std::vector<std::string>& target_vocab,
                                                const std::vector<std::string>& off_vocab,
                                                std::size_t good_every = 10) {
  Rng rng(seed);
  const ZipfSampler target(target_vocab);
  const ZipfSampler off(off_vocab);
  std::vector<Document> docs;
  docs.reserve(n_docs);
  for (std::size_t d = 0; d < n_docs; ++d) {
    const bool good = (d % good_every) == 0;
    const double quality = good ? 0.9 + 0.1 * rng.unit() : 0.12;
    std::vector<Sentence> sentences;
    for (std::size_t s = 0; s < 2; ++s) {
      Sentence sent;
      for (std::size_t t = 0; t < 6; ++t) {
        sent.tokens.push_back(rng.unit() < quality ? target.draw(rng) : off.draw(rng));
      }
      sentences.push_back(std::move(sent));
    }
    docs.push_back(finish_doc(d, std::move(sentences),
                              good ? std::string("target") : std::string("offdomain")));
  }
  return docs;
}

// Documents with i.i.d. sentences and widely varying sentence counts; the
// short-document preference comes out of the score variance of small means.
inline std::vector<Document> make_mixed_length_corpus(std::uint64_t seed, std::size_t n_docs,
                                                      const std::vector<std::string>& target_vocab,
                                                      const std::vector<std::string>& off_vocab,
                                                      std::size_t max_sentences = 30) {
  Rng rng(seed);
  const ZipfSampler target(target_vocab);
  const ZipfSampler off(off_vocab);
  std::vector<Document> docs;
  docs.reserve(n_docs);
  for (std::size_t d = 0; d < n_docs; ++d) {
    const double quality = rng.unit();
    const std::size_t n_sentences = 1 + rng.bounded(max_sentences);
    std::vector<Sentence> sentences;
    for (std::size_t s = 0; s < n_sentences; ++s) {
      Sentence sent;
      const std::size_t len = 4 + rng.bounded(6);
      for (std::size_t t = 0; t < len; ++t) {
        sent.tokens.push_back(rng.unit() < quality ? target.draw(rng) : off.draw(rng));
      }
      sentences.push_back(std::move(sent));
    }
    docs.push_back(finish_doc(d, std::move(sentences), std::nullopt));
  }
  return docs;
}

// Writes documents as Pile-style JSONL. Tokens are alphanumeric, so the
// reconstructed text re-ingests to the same token sentences.
inline void write_jsonl(const std::string& path, const std::vector<Document>& docs) {
  std::ofstream out(path, std::ios::binary);
  for (const auto& doc : docs) {
    out << "{\"text\": \"" << doc_to_text(doc) << "\"";
    if (doc.domain) {
      out << ", \"meta\": {\"pile_set_name\": \"" << *doc.domain << "\"}";
    }
    out << "}\n";
  }
}

}  // namespace cynsel::testing

#endif  // CYNSEL_TESTS_SUPPORT_SYNTHETIC_HPP_
