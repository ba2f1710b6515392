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

#include "cynsel/corpus.hpp"

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>

#include <json.hpp>

namespace cynsel {
namespace {

// Code points treated as whitespace. ASCII ws plus the Unicode space
// separators, NEL and the line/paragraph separators.
bool is_ws_codepoint(char32_t cp) {
  switch (cp) {
    case U'\t':
    case U'\n':
    case U'\v':
    case U'\f':
    case U'\r':
    case U' ':
    case 0x0085:  // NEL
    case 0x00A0:  // NBSP
    case 0x1680:
    case 0x2028:
    case 0x2029:
    case 0x202F:
    case 0x205F:
    case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

// Decodes one UTF-8 code point at `pos`; advances `pos` past it. Invalid
// bytes decode as themselves so malformed input degrades to byte handling.
char32_t decode_utf8(std::string_view text, std::size_t& pos) {
  const auto byte = [&](std::size_t i) {
    return static_cast<unsigned char>(text[i]);
  };
  const unsigned char b0 = byte(pos);
  if (b0 < 0x80) {
    ++pos;
    return b0;
  }
  int len = 0;
  char32_t cp = 0;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2;
    cp = b0 & 0x1F;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3;
    cp = b0 & 0x0F;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4;
    cp = b0 & 0x07;
  } else {
    ++pos;
    return b0;
  }
  if (pos + len > text.size()) {
    ++pos;
    return b0;
  }
  for (int i = 1; i < len; ++i) {
    const unsigned char bi = byte(pos + i);
    if ((bi & 0xC0) != 0x80) {
      ++pos;
      return b0;
    }
    cp = (cp << 6) | (bi & 0x3F);
  }
  pos += len;
  return cp;
}

bool is_ascii_punct(unsigned char c) {
  return (c >= '!' && c <= '/') || (c >= ':' && c <= '@') ||
         (c >= '[' && c <= '`') || (c >= '{' && c <= '~');
}

bool is_terminal_punct(char c) { return c == '.' || c == '!' || c == '?'; }

// True when the text at `pos` starts with a whitespace code point.
bool ws_at(std::string_view text, std::size_t pos) {
  if (pos >= text.size()) return false;
  std::size_t p = pos;
  return is_ws_codepoint(decode_utf8(text, p));
}

void push_token(std::vector<std::string>& out, std::string_view raw, bool lowercase) {
  std::size_t begin = 0;
  std::size_t end = raw.size();
  while (begin < end && is_ascii_punct(static_cast<unsigned char>(raw[begin]))) ++begin;
  while (end > begin && is_ascii_punct(static_cast<unsigned char>(raw[end - 1]))) --end;
  if (begin == end) return;
  std::string token(raw.substr(begin, end - begin));
  if (lowercase) {
    for (char& c : token) {
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
  }
  out.push_back(std::move(token));
}

std::string_view trim_ws(std::string_view text) {
  std::size_t begin = 0;
  while (begin < text.size()) {
    std::size_t p = begin;
    if (!is_ws_codepoint(decode_utf8(text, p))) break;
    begin = p;
  }
  std::size_t end = text.size();
  while (end > begin) {
    // Walk back over one trailing code point at a time.
    std::size_t start = end - 1;
    while (start > begin && (static_cast<unsigned char>(text[start]) & 0xC0) == 0x80) --start;
    std::size_t p = start;
    const char32_t cp = decode_utf8(text, p);
    if (p != end || !is_ws_codepoint(cp)) break;
    end = start;
  }
  return text.substr(begin, end - begin);
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text, bool lowercase) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  std::size_t token_start = 0;
  bool in_token = false;
  while (pos < text.size()) {
    const std::size_t here = pos;
    const char32_t cp = decode_utf8(text, pos);
    if (is_ws_codepoint(cp)) {
      if (in_token) {
        push_token(out, text.substr(token_start, here - token_start), lowercase);
        in_token = false;
      }
    } else if (!in_token) {
      token_start = here;
      in_token = true;
    }
  }
  if (in_token) push_token(out, text.substr(token_start), lowercase);
  return out;
}

std::vector<std::string> split_sentences(std::string_view text) {
  std::vector<std::string> out;
  std::size_t seg_start = 0;
  const auto flush = [&](std::size_t end) {
    const std::string_view seg = trim_ws(text.substr(seg_start, end - seg_start));
    if (!seg.empty()) out.emplace_back(seg);
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '\n') {
      flush(i);
      seg_start = i + 1;
    } else if (is_terminal_punct(c) && ws_at(text, i + 1)) {
      flush(i + 1);
      seg_start = i + 1;
    }
  }
  flush(text.size());
  return out;
}

CorpusReader::CorpusReader(const std::string& path, IngestConfig config)
    : config_(std::move(config)), input_(path, std::ios::binary) {
  if (!input_) throw InputError("cannot open corpus file: " + path);
  resolved_format_ = config_.format;
  if (resolved_format_ == CorpusFormat::Auto) {
    const bool jsonl = path.ends_with(".jsonl") || path.ends_with(".ndjson");
    resolved_format_ = jsonl ? CorpusFormat::Jsonl : CorpusFormat::Text;
  }
}

void CorpusReader::record_malformed(std::uint64_t line_no, const std::string& message) {
  ++malformed_records_;
  if (malformed_samples_.size() < 10) {
    malformed_samples_.push_back("line " + std::to_string(line_no) + ": " + message);
  }
}

std::optional<Document> CorpusReader::build_document(const std::string& text,
                                                     std::optional<std::string> domain) {
  if (domain && config_.excluded_domains.count(*domain)) {
    ++skipped_excluded_;
    return std::nullopt;
  }
  Document doc;
  doc.domain = std::move(domain);
  doc.byte_size = text.size();
  for (const std::string& raw : split_sentences(text)) {
    Sentence s;
    s.tokens = tokenize(raw, config_.lowercase);
    if (!s.empty()) doc.sentences.push_back(std::move(s));
  }
  if (doc.sentences.size() < config_.min_doc_sentences) {
    ++skipped_short_;
    return std::nullopt;
  }
  doc.doc_id = next_doc_id_++;
  return doc;
}

std::optional<Document> CorpusReader::next_jsonl() {
  std::string line;
  while (std::getline(input_, line)) {
    ++line_no_;
    if (line.empty()) continue;
    const auto record = nlohmann::json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (record.is_discarded() || !record.is_object()) {
      record_malformed(line_no_, "not a JSON object");
      continue;
    }
    const auto text_it = record.find("text");
    if (text_it == record.end() || !text_it->is_string()) {
      record_malformed(line_no_, "missing string field \"text\"");
      continue;
    }
    std::optional<std::string> domain;
    const auto meta_it = record.find("meta");
    if (meta_it != record.end() && meta_it->is_object()) {
      const auto name_it = meta_it->find("pile_set_name");
      if (name_it != meta_it->end() && name_it->is_string()) {
        domain = name_it->get<std::string>();
      }
    }
    if (auto doc = build_document(text_it->get<std::string>(), std::move(domain))) {
      return doc;
    }
  }
  return std::nullopt;
}

std::optional<Document> CorpusReader::next_text() {
  std::string line;
  std::string block;
  bool saw_content = false;
  while (std::getline(input_, line)) {
    ++line_no_;
    if (trim_ws(line).empty()) {
      if (saw_content) {
        if (auto doc = build_document(block, std::nullopt)) return doc;
        block.clear();
        saw_content = false;
      }
      continue;
    }
    if (saw_content) block += '\n';
    block += line;
    saw_content = true;
  }
  if (saw_content) {
    if (auto doc = build_document(block, std::nullopt)) return doc;
  }
  return std::nullopt;
}

std::optional<Document> CorpusReader::next() {
  return resolved_format_ == CorpusFormat::Jsonl ? next_jsonl() : next_text();
}

std::vector<Document> read_corpus(const std::string& path, const IngestConfig& config) {
  CorpusReader reader(path, config);
  std::vector<Document> docs;
  while (auto doc = reader.next()) docs.push_back(std::move(*doc));
  return docs;
}

}  // namespace cynsel
