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

// Per-utterance records persisted by a run, and the metric reports derived
// from them. Reports are a pure function of the records, which is what
// `verify` relies on.

#ifndef ASREVAL_REPORT_HPP_
#define ASREVAL_REPORT_HPP_

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "asreval/aggregate.hpp"
#include "asreval/align.hpp"
#include "asreval/data_model.hpp"
#include "asreval/normalizer.hpp"
#include "asreval/transcriber.hpp"

namespace asreval {

enum class OutcomeStatus { ok, failed, missing };

std::string_view to_string(OutcomeStatus s);

// One line of alignments.jsonl. Every manifest utterance gets one, scored
// or not, so strata can be rebuilt without the manifest.
struct UtteranceOutcome {
  std::string utterance_id;
  double duration_s = 0.0;
  std::string speaker_id;
  Gender gender = Gender::unknown;
  std::string dataset;
  Split split = Split::test;

  OutcomeStatus status = OutcomeStatus::missing;
  std::string ref_norm;
  std::string hyp_norm;
  std::string ref_fingerprint;
  std::string hyp_fingerprint;
  AlignmentResult words{Unit::word};
  AlignmentResult chars{Unit::character};
  std::vector<std::string> warnings;

  bool scored() const { return status == OutcomeStatus::ok; }
  UtteranceRecord as_record() const;
};

// One line of semantic.jsonl.
struct SemanticRecord {
  std::string utterance_id;
  double precision = 0.0;
  double recall = 0.0;
  double f1_scaled = 0.0;
  bool degenerate = false;
  std::size_t ref_tokens = 0;
};

struct MetricRow {
  std::string by;     // stratum definition, "" for the overall row
  std::string label;  // "all" for the overall row
  std::size_t utterances = 0;  // scored members
  AggregateMetrics metrics;
  std::optional<double> rtf_pct;
  std::optional<double> bert_f1;
};

struct MetricReport {
  std::string model_id;
  std::string profile;
  std::string profile_fingerprint;
  std::optional<std::string> provider_id;
  std::string strata;
  std::size_t requested = 0;
  std::size_t scored = 0;
  std::vector<MetricRow> rows;  // overall row first
  std::optional<double> wer_male_pct;
  std::optional<double> wer_female_pct;
  std::optional<double> gender_relative_delta_pct;  // (female - male) / male * 100
  std::vector<std::string> warnings;

  const MetricRow& overall() const { return rows.front(); }
};

struct ReportInputs {
  std::string model_id;
  std::string profile;
  std::string profile_fingerprint;
  std::optional<std::string> provider_id;
  std::string strata;
  std::vector<UtteranceOutcome> outcomes;
  std::vector<TimingRecord> timings;
  std::optional<std::vector<SemanticRecord>> semantic;
  std::vector<std::string> warnings;
};

MetricReport build_report(const ReportInputs& inputs);

// Per-utterance outcomes for a manifest and one hypothesis per utterance.
// Failed and absent hypotheses yield unscored outcomes.
UtteranceOutcome score_utterance(const UtteranceRecord& u, const Hypothesis* h, const NormalizationProfile& profile);

void write_outcomes(std::ostream& out, const std::vector<UtteranceOutcome>& outcomes);
std::vector<UtteranceOutcome> parse_outcomes(std::istream& in, const std::string& source_name);
void write_semantic(std::ostream& out, const std::vector<SemanticRecord>& records);
std::vector<SemanticRecord> parse_semantic(std::istream& in, const std::string& source_name);

enum class ReportFormat { csv, markdown, json };

inline constexpr const char* kUndefinedDir = "\u2014";

std::optional<ReportFormat> parse_report_format(std::string_view s);

// Table of every (model, stratum) row; models ordered by overall WER
// ascending, undefined WER last. Undefined metrics print as "nan" and an
// undefined DIR as kUndefinedDir; JSON uses null.
std::string render_report(const std::vector<MetricReport>& reports, ReportFormat format);

std::string report_to_json(const MetricReport& report);
MetricReport report_from_json(const std::string& text);

struct ScatterPoint {
  std::string model_id;
  double rtf_pct;
  double wer_pct;
};

std::vector<ScatterPoint> scatter_data(const std::vector<MetricReport>& reports, std::vector<std::string>* warnings);
std::string render_scatter_csv(const std::vector<ScatterPoint>& points);

// Shortest decimal that round-trips, "nan" when absent.
std::string format_number(std::optional<double> v);

}  // namespace asreval

#endif  // ASREVAL_REPORT_HPP_
