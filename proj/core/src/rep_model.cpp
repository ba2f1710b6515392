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

#include "cynsel/rep_model.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "cynsel/version.hpp"

namespace cynsel {

VocabCounts count_tokens(const std::vector<Document>& docs) {
  VocabCounts counts;
  for (const auto& doc : docs) counts.add(doc);
  return counts;
}

RepModel RepModel::from_counts(const VocabCounts& counts, std::uint64_t min_count) {
  RepModel model;
  for (const auto& [word, count] : counts.counts) {
    if (count >= min_count && count > 0) {
      model.vocab_.push_back(word);
      model.counts_.push_back(count);
      model.total_ += count;
    }
  }
  if (model.vocab_.empty()) {
    throw InputError("representative corpus too small");
  }
  model.probs_.reserve(model.vocab_.size());
  for (std::size_t i = 0; i < model.vocab_.size(); ++i) {
    model.probs_.push_back(static_cast<double>(model.counts_[i]) /
                           static_cast<double>(model.total_));
    model.index_.emplace(model.vocab_[i], static_cast<std::uint32_t>(i));
  }
  return model;
}

RepModel build_rep_model(CorpusReader& rep_corpus, std::uint64_t min_count) {
  VocabCounts counts;
  while (auto doc = rep_corpus.next()) counts.add(*doc);
  return RepModel::from_counts(counts, min_count);
}

RepModel build_rep_model(const std::vector<Document>& rep_corpus, std::uint64_t min_count) {
  return RepModel::from_counts(count_tokens(rep_corpus), min_count);
}

void RepModel::save(const std::string& path, const std::string& config_hash) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write rep model: " + path);
  out << "# cynsel rep-model v1\n";
  out << "# tool_version " << kToolVersion << "\n";
  if (!config_hash.empty()) out << "# config_hash " << config_hash << "\n";
  out << "# total " << total_ << "\n";
  out << "# types " << vocab_.size() << "\n";
  for (std::size_t i = 0; i < vocab_.size(); ++i) {
    out << vocab_[i] << '\t' << counts_[i] << '\n';
  }
  if (!out) throw Error("write failed: " + path);
}

RepModel RepModel::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open rep model: " + path);
  VocabCounts counts;
  std::string line;
  std::uint64_t declared_total = 0;
  bool have_total = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream header(line.substr(1));
      std::string key;
      header >> key;
      if (key == "total") {
        header >> declared_total;
        have_total = true;
      }
      continue;
    }
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw InputError("malformed rep model line in " + path + ": " + line);
    }
    const std::string word = line.substr(0, tab);
    std::uint64_t count = 0;
    try {
      count = std::stoull(line.substr(tab + 1));
    } catch (const std::exception&) {
      throw InputError("malformed rep model count in " + path + ": " + line);
    }
    counts.counts[word] += count;
    counts.total += count;
  }
  if (have_total && declared_total != counts.total) {
    throw InputError("rep model total mismatch in " + path);
  }
  return from_counts(counts, 1);
}

double cross_entropy(const RepModel& rep, const VocabCounts& counts) {
  const double total = static_cast<double>(counts.total);
  double h = 0.0;
  for (std::uint32_t i = 0; i < rep.size(); ++i) {
    const auto it = counts.counts.find(rep.word(i));
    if (it == counts.counts.end() || it->second == 0) {
      throw Error("unseeded state: word \"" + rep.word(i) + "\" has zero count");
    }
    h -= rep.prob(i) * std::log(static_cast<double>(it->second) / total);
  }
  return h;
}

}  // namespace cynsel
