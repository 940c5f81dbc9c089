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

// End-to-end evaluation: manifest -> hypotheses -> normalization ->
// alignment -> optional semantic scoring -> report, with every stage
// persisted to the run directory:
//
//   hyps.jsonl  timings.jsonl  alignments.jsonl  semantic.jsonl
//   report.json  report.csv  report.md  run_meta.json
//
// Only run_meta.json carries timestamps.

#ifndef ASREVAL_PIPELINE_HPP_
#define ASREVAL_PIPELINE_HPP_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "asreval/data_model.hpp"
#include "asreval/embedding_provider.hpp"
#include "asreval/normalizer.hpp"
#include "asreval/report.hpp"
#include "asreval/transcriber.hpp"

namespace asreval {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, std::string utterance_id, const std::string& what);
  const std::string& stage() const { return stage_; }
  const std::string& utterance_id() const { return utterance_id_; }

 private:
  std::string stage_;
  std::string utterance_id_;
};

using TranscriberFactory = std::function<std::unique_ptr<Transcriber>(const TranscriberSpec&, const Manifest&)>;

struct RunConfig {
  std::filesystem::path manifest;
  // Exactly one of these two.
  std::optional<std::filesystem::path> transcriber_spec;
  std::optional<std::filesystem::path> hypotheses;
  // Selects one prompt's hypotheses from a file holding several.
  std::optional<std::string> prompt_id;

  ProfileName profile = ProfileName::basic;
  std::string strata;
  bool semantic = false;
  std::string provider = "deterministic";
  std::uint64_t seed = 0;
  std::optional<std::filesystem::path> cache_dir;
  std::filesystem::path out_dir;
  // Defaults to the transcriber id or the hypothesis file stem.
  std::string model_id;

  void validate() const;
};

// In-memory scoring of one hypothesis set.
struct Evaluation {
  std::vector<UtteranceOutcome> outcomes;
  std::optional<std::vector<SemanticRecord>> semantic;
  MetricReport report;
};

struct EvaluationOptions {
  std::string model_id;
  std::string strata;
  EmbeddingProvider* provider = nullptr;  // semantic scoring when set
};

// `hyps` holds at most one entry per utterance.
Evaluation evaluate(const Manifest& manifest, const std::vector<Hypothesis>& hyps,
                    const std::vector<TimingRecord>& timings, const NormalizationProfile& profile,
                    const EvaluationOptions& options);

// Reference and hypothesis embeddings for every scored outcome.
std::vector<SemanticRecord> semantic_records(const std::vector<UtteranceOutcome>& outcomes,
                                             EmbeddingProvider& provider);

struct RunResult {
  MetricReport report;
  std::size_t failures = 0;
  std::size_t missing = 0;
  bool aborted = false;
  std::vector<std::string> errors;

  // 0 all utterances scored, 2 some failed or missing, 1 aborted.
  int exit_code() const;
};

// Loads hypotheses (transcribing if needed) and their timings for a config.
struct HypothesisSet {
  std::string model_id;
  std::vector<Hypothesis> hypotheses;
  std::vector<TimingRecord> timings;
  std::vector<std::string> errors;
  std::size_t failures = 0;
  bool aborted = false;
};

HypothesisSet acquire_hypotheses(const RunConfig& config, const Manifest& manifest,
                                 const TranscriberFactory& factory = {});

std::unique_ptr<EmbeddingProvider> open_provider(const RunConfig& config);

RunResult run_pipeline(const RunConfig& config, const TranscriberFactory& factory = {});

struct VerifyResult {
  std::size_t utterances_checked = 0;
  std::vector<std::string> discrepancies;
  bool ok() const { return discrepancies.empty(); }
};

// Re-derives alignments and every aggregate of a run directory from its
// per-utterance records and compares them with the stored reports.
VerifyResult verify_run(const std::filesystem::path& run_dir);

struct ImpactRow {
  std::string profile;
  std::optional<double> wer_pct;
  std::optional<double> bert_f1;
};

// Scores the same hypotheses under the basic and whisper profiles.
std::vector<ImpactRow> normalization_impact(const Manifest& manifest, const std::vector<Hypothesis>& hyps,
                                            EmbeddingProvider* provider);
std::string render_impact(const std::vector<ImpactRow>& rows, ReportFormat format);

}  // namespace asreval

#endif  // ASREVAL_PIPELINE_HPP_
