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

#ifndef CYNSEL_CORPUS_HPP_
#define CYNSEL_CORPUS_HPP_

#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "cynsel/error.hpp"

namespace cynsel {

// One tokenized sentence. Empty sentences are legal values; ingestion
// drops them before they reach selection.
struct Sentence {
  std::vector<std::string> tokens;

  std::uint64_t length() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }
};

// A tokenized document with a stable id and optional domain tag.
struct Document {
  std::uint64_t doc_id = 0;
  std::optional<std::string> domain;
  std::vector<Sentence> sentences;
  std::uint64_t byte_size = 0;  // bytes of the raw text this was built from

  std::uint64_t token_count() const {
    std::uint64_t n = 0;
    for (const auto& s : sentences) n += s.length();
    return n;
  }
};

enum class CorpusFormat {
  Auto,   // by extension: .jsonl/.ndjson -> Jsonl, anything else -> Text
  Jsonl,  // one JSON object per line: {"text": ..., "meta": {"pile_set_name": ...}}
  Text,   // blank-line-separated blocks, no domain tags
};

struct IngestConfig {
  std::set<std::string> excluded_domains;
  bool lowercase = true;
  std::uint32_t min_doc_sentences = 1;  // must stay >= 1
  CorpusFormat format = CorpusFormat::Auto;
};

// Whitespace splitting with per-token punctuation stripping.
// Splits on Unicode whitespace, strips leading/trailing ASCII punctuation
// from each token, drops tokens that end up empty, and lowercases ASCII
// letters when requested.
std::vector<std::string> tokenize(std::string_view text, bool lowercase);

// Rule-based splitter: cuts on newline and after a terminal . ! ? that is
// followed by whitespace. Segments are trimmed; empty segments are dropped.
// Cuts happen only at whitespace, so tokens are never split.
std::vector<std::string> split_sentences(std::string_view text);

// Streaming corpus reader. One document is materialized at a time; peak
// memory does not grow with file size. Documents are emitted in file order
// with dense doc_ids starting at 0 (skipped records do not consume ids).
class CorpusReader {
 public:
  // Throws InputError if the file cannot be opened.
  CorpusReader(const std::string& path, IngestConfig config);

  // Next surviving document, or nullopt at end of input.
  std::optional<Document> next();

  // Ingestion counters, valid at any point of the stream.
  std::uint64_t malformed_records() const { return malformed_records_; }
  std::uint64_t skipped_excluded() const { return skipped_excluded_; }
  std::uint64_t skipped_short() const { return skipped_short_; }
  // First few malformed-record diagnostics, each with its line number.
  const std::vector<std::string>& malformed_samples() const { return malformed_samples_; }

  const IngestConfig& config() const { return config_; }

 private:
  std::optional<Document> next_jsonl();
  std::optional<Document> next_text();
  // Splits, tokenizes and filters one raw text into a document.
  // Returns nullopt if the document does not survive filtering.
  std::optional<Document> build_document(const std::string& text,
                                         std::optional<std::string> domain);
  void record_malformed(std::uint64_t line_no, const std::string& message);

  IngestConfig config_;
  std::ifstream input_;
  CorpusFormat resolved_format_;
  std::uint64_t line_no_ = 0;
  std::uint64_t next_doc_id_ = 0;
  std::uint64_t malformed_records_ = 0;
  std::uint64_t skipped_excluded_ = 0;
  std::uint64_t skipped_short_ = 0;
  std::vector<std::string> malformed_samples_;
};

// Drains a reader into memory.
std::vector<Document> read_corpus(const std::string& path, const IngestConfig& config);

}  // namespace cynsel

#endif  // CYNSEL_CORPUS_HPP_
