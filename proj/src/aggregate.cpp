// Copyright 2026 The asreval Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "asreval/aggregate.hpp"

#include <map>
#include <stdexcept>

namespace asreval {

namespace {

std::optional<double> rate_pct(std::uint64_t errors, std::uint64_t n_ref) {
  if (n_ref == 0) return std::nullopt;
  return 100.0 * static_cast<double>(errors) / static_cast<double>(n_ref);
}

bool known_key(std::string_view key) {
  return key == "gender" || key == "dataset" || key == "split" || key == "speaker_id";
}

}  // namespace

AlignmentTotals& AlignmentTotals::operator+=(const AlignmentResult& r) {
  n_ref += r.n_ref;
  substitutions += r.substitutions;
  insertions += r.insertions;
  deletions += r.deletions;
  correct += r.correct;
  return *this;
}

AlignmentTotals sum_alignments(std::span<const AlignmentResult> results) {
  AlignmentTotals t;
  for (const auto& r : results) {
    if (r.unit != results.front().unit) throw std::invalid_argument("cannot aggregate word and char alignments");
    t += r;
  }
  return t;
}

std::optional<double> deletion_insertion_ratio(const AlignmentTotals& t) {
  if (t.insertions == 0) return std::nullopt;
  return static_cast<double>(t.deletions) / static_cast<double>(t.insertions);
}

std::optional<double> skip_corrected_wer_pct(const AlignmentTotals& t) {
  return rate_pct(t.substitutions + 2 * t.insertions, t.n_ref);
}

AggregateMetrics aggregate(const AlignmentTotals& words, const AlignmentTotals& chars) {
  AggregateMetrics m;
  m.words = words;
  m.chars = chars;
  m.wer_pct = rate_pct(words.errors(), words.n_ref);
  m.cer_pct = rate_pct(chars.errors(), chars.n_ref);
  m.dir = deletion_insertion_ratio(words);
  m.skip_corrected_wer_pct = skip_corrected_wer_pct(words);
  return m;
}

AggregateMetrics aggregate(std::span<const AlignmentResult> word_results,
                           std::span<const AlignmentResult> char_results) {
  return aggregate(sum_alignments(word_results), sum_alignments(char_results));
}

std::string StratumDef::name() const {
  std::string out;
  for (const auto& k : keys) {
    if (!out.empty()) out += '+';
    out += k;
  }
  return out;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace

std::vector<StratumDef> parse_strata(std::string_view spec) {
  std::vector<StratumDef> out;
  std::size_t pos = 0;
  while (pos <= spec.size()) {
    std::size_t comma = spec.find(',', pos);
    if (comma == std::string_view::npos) comma = spec.size();
    std::string_view group = trim(spec.substr(pos, comma - pos));
    if (!group.empty()) {
      StratumDef def;
      std::size_t p = 0;
      while (p <= group.size()) {
        std::size_t plus = group.find('+', p);
        if (plus == std::string_view::npos) plus = group.size();
        std::string key(trim(group.substr(p, plus - p)));
        if (!known_key(key)) throw std::invalid_argument("unknown stratum key '" + key + "'");
        def.keys.push_back(std::move(key));
        p = plus + 1;
      }
      out.push_back(std::move(def));
    }
    pos = comma + 1;
  }
  return out;
}

std::optional<std::string> stratum_label(const UtteranceRecord& record, const StratumDef& def) {
  std::string label;
  for (const auto& key : def.keys) {
    if (!label.empty()) label += '/';
    if (key == "gender") {
      if (record.gender == Gender::unknown) return std::nullopt;
      label += to_string(record.gender);
    } else if (key == "dataset") {
      label += record.dataset;
    } else if (key == "split") {
      label += to_string(record.split);
    } else if (key == "speaker_id") {
      label += record.speaker_id;
    }
  }
  return label;
}

std::vector<UtteranceGroup> group_utterances(const Manifest& manifest, std::span<const StratumDef> strata) {
  std::vector<UtteranceGroup> groups;
  UtteranceGroup all{"", "all", {}};
  for (std::size_t i = 0; i < manifest.size(); ++i) all.members.push_back(i);
  groups.push_back(std::move(all));

  for (const auto& def : strata) {
    std::map<std::string, std::vector<std::size_t>> by_label;
    for (std::size_t i = 0; i < manifest.size(); ++i) {
      if (auto label = stratum_label(manifest.records()[i], def)) by_label[*label].push_back(i);
    }
    for (auto& [label, members] : by_label) groups.push_back({def.name(), label, std::move(members)});
  }
  return groups;
}

}  // namespace asreval
