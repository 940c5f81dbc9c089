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

// Micro aggregation of alignment counts and stratification of utterances.

#ifndef ASREVAL_AGGREGATE_HPP_
#define ASREVAL_AGGREGATE_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "asreval/align.hpp"
#include "asreval/data_model.hpp"

namespace asreval {

struct AlignmentTotals {
  std::uint64_t n_ref = 0;
  std::uint64_t substitutions = 0;
  std::uint64_t insertions = 0;
  std::uint64_t deletions = 0;
  std::uint64_t correct = 0;

  AlignmentTotals& operator+=(const AlignmentResult& r);
  std::uint64_t errors() const { return substitutions + insertions + deletions; }
};

// Throws std::invalid_argument when units are mixed.
AlignmentTotals sum_alignments(std::span<const AlignmentResult> results);

// All rates are percentages; an empty optional means undefined.
struct AggregateMetrics {
  std::optional<double> wer_pct;
  std::optional<double> cer_pct;
  std::optional<double> dir;                     // sum D / sum I
  std::optional<double> skip_corrected_wer_pct;  // sum D replaced by sum I
  AlignmentTotals words;
  AlignmentTotals chars;

  std::uint64_t total_ref_words() const { return words.n_ref; }
};

AggregateMetrics aggregate(std::span<const AlignmentResult> word_results,
                           std::span<const AlignmentResult> char_results = {});
AggregateMetrics aggregate(const AlignmentTotals& words, const AlignmentTotals& chars);

std::optional<double> deletion_insertion_ratio(const AlignmentTotals& t);
std::optional<double> skip_corrected_wer_pct(const AlignmentTotals& t);

// One stratification, e.g. {"gender"} or the cross product {"dataset", "split"}.
// Recognized keys: gender, dataset, split, speaker_id.
struct StratumDef {
  std::vector<std::string> keys;
  std::string name() const;  // keys joined by '+'
};

// "gender,dataset+split" -> {{gender}, {dataset, split}}. Throws
// std::invalid_argument on unknown keys.
std::vector<StratumDef> parse_strata(std::string_view spec);

// Label of `record` within `def` (values joined by '/'), or empty when the
// record is excluded, which happens for gender == unknown.
std::optional<std::string> stratum_label(const UtteranceRecord& record, const StratumDef& def);

struct UtteranceGroup {
  std::string by;     // "" for the overall group
  std::string label;  // "all" for the overall group
  std::vector<std::size_t> members;  // manifest indices, manifest order
};

// Overall group first, then each stratification in the given order with
// labels sorted. Groups are derived from the manifest, so a stratum with no
// transcribed utterances still appears.
std::vector<UtteranceGroup> group_utterances(const Manifest& manifest, std::span<const StratumDef> strata);

}  // namespace asreval

#endif  // ASREVAL_AGGREGATE_HPP_
