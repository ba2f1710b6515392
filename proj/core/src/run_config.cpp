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

#include "cynsel/run_config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

namespace cynsel {
namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0;
  while (b < s.size() && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
  std::size_t e = s.size();
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
  return std::string(s.substr(b, e - b));
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  throw InputError("config key \"" + key + "\": expected a boolean, got \"" + value + "\"");
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  std::uint64_t out = 0;
  const auto res = std::from_chars(value.data(), value.data() + value.size(), out);
  if (res.ec != std::errc{} || res.ptr != value.data() + value.size()) {
    throw InputError("config key \"" + key + "\": expected an integer, got \"" + value + "\"");
  }
  return out;
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double out = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return out;
  } catch (const std::exception&) {
    throw InputError("config key \"" + key + "\": expected a number, got \"" + value + "\"");
  }
}

std::string render_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

const char* format_name(CorpusFormat format) {
  switch (format) {
    case CorpusFormat::Jsonl:
      return "jsonl";
    case CorpusFormat::Text:
      return "text";
    default:
      return "auto";
  }
}

}  // namespace

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t hash = 14695981039346656037ull;
  for (const char c : data) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 1099511628211ull;
  }
  return hash;
}

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config file: " + path);
  RunConfig config;
  std::string line;
  std::uint64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash_pos = line.find('#');
    if (hash_pos != std::string::npos) line.erase(hash_pos);
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw InputError("config line " + std::to_string(line_no) +
                       ": expected key = value, got \"" + stripped + "\"");
    }
    config.set(trim(stripped.substr(0, eq)), trim(stripped.substr(eq + 1)));
  }
  return config;
}

void RunConfig::set(const std::string& key, const std::string& value) {
  if (key == "corpus") {
    corpus_path = value;
  } else if (key == "rep_corpus") {
    rep_corpus_path = value;
  } else if (key == "rep_model") {
    rep_model_path = value;
  } else if (key == "target") {
    target_path = value;
  } else if (key == "manifest") {
    manifest_path = value;
  } else if (key == "out_dir") {
    out_dir = value;
  } else if (key == "exclude_domains") {
    std::istringstream parts(value);
    std::string part;
    while (std::getline(parts, part, ',')) {
      const std::string domain = trim(part);
      if (!domain.empty()) ingest.excluded_domains.insert(domain);
    }
  } else if (key == "lowercase") {
    ingest.lowercase = parse_bool(key, value);
  } else if (key == "min_doc_sentences") {
    const auto n = parse_u64(key, value);
    if (n == 0) throw InputError("min_doc_sentences must be >= 1");
    ingest.min_doc_sentences = static_cast<std::uint32_t>(n);
  } else if (key == "format") {
    if (value == "auto") {
      ingest.format = CorpusFormat::Auto;
    } else if (value == "jsonl") {
      ingest.format = CorpusFormat::Jsonl;
    } else if (value == "text") {
      ingest.format = CorpusFormat::Text;
    } else {
      throw InputError("config key \"format\": expected auto|jsonl|text, got \"" + value + "\"");
    }
  } else if (key == "min_count") {
    min_count = parse_u64(key, value);
    if (min_count == 0) throw InputError("min_count must be >= 1");
  } else if (key == "k") {
    k = parse_double(key, value);
    if (!(k > 0.0) || k > 1.0) throw InputError("k must be in (0, 1]");
  } else if (key == "token_budget") {
    token_budget = parse_u64(key, value);
  } else if (key == "mode") {
    if (value == "exact") {
      mode = SelectionMode::Exact;
    } else if (value == "lazy") {
      mode = SelectionMode::Lazy;
    } else {
      throw InputError("config key \"mode\": expected exact|lazy, got \"" + value + "\"");
    }
  } else if (key == "shards") {
    const auto n = parse_u64(key, value);
    if (n == 0) throw InputError("shards must be >= 1");
    shards = static_cast<std::uint32_t>(n);
  } else if (key == "threads") {
    threads = static_cast<std::uint32_t>(parse_u64(key, value));
  } else if (key == "seed") {
    seed = parse_u64(key, value);
  } else if (key == "emit_tsv") {
    emit_tsv = parse_bool(key, value);
  } else if (key == "emit_trace") {
    emit_trace = parse_bool(key, value);
  } else {
    throw InputError("unknown config key: \"" + key + "\"");
  }
}

std::string RunConfig::canonical() const {
  std::ostringstream out;
  for (const auto& [key, value] : echo()) {
    out << key << '=' << value << '\n';
  }
  return out.str();
}

std::map<std::string, std::string> RunConfig::echo() const {
  std::map<std::string, std::string> map;
  map["corpus"] = corpus_path;
  map["rep_corpus"] = rep_corpus_path;
  map["rep_model"] = rep_model_path;
  map["target"] = target_path;
  map["manifest"] = manifest_path;
  std::string domains;
  for (const auto& d : ingest.excluded_domains) {
    if (!domains.empty()) domains += ',';
    domains += d;
  }
  map["exclude_domains"] = domains;
  map["lowercase"] = ingest.lowercase ? "true" : "false";
  map["min_doc_sentences"] = std::to_string(ingest.min_doc_sentences);
  map["format"] = format_name(ingest.format);
  map["min_count"] = std::to_string(min_count);
  map["k"] = render_double(k);
  map["token_budget"] = std::to_string(token_budget);
  map["mode"] = to_string(mode);
  map["shards"] = std::to_string(shards);
  map["seed"] = std::to_string(seed);
  map["emit_tsv"] = emit_tsv ? "true" : "false";
  map["emit_trace"] = emit_trace ? "true" : "false";
  // threads and out_dir deliberately excluded: artifact bytes must not
  // depend on core count or on where they are written
  return map;
}

std::string RunConfig::config_hash() const {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(canonical())));
  return buf;
}

SelectionConfig RunConfig::selection_config() const {
  SelectionConfig config;
  config.budget = token_budget > 0 ? SelectionBudget::from_tokens(token_budget)
                                   : SelectionBudget::from_fraction(k);
  config.mode = mode;
  return config;
}

unsigned RunConfig::resolved_threads() const {
  if (threads != 0) return threads;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace cynsel
