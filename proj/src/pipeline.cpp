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

#include "asreval/pipeline.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "json.hpp"

namespace asreval {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "0.1.0";

StageError::StageError(std::string stage, std::string utterance_id, const std::string& what)
    : std::runtime_error("stage '" + stage + "' failed" +
                         (utterance_id.empty() ? std::string() : " on utterance '" + utterance_id + "'") + ": " + what),
      stage_(std::move(stage)),
      utterance_id_(std::move(utterance_id)) {}

void RunConfig::validate() const {
  if (manifest.empty()) throw ConfigError("a manifest is required");
  if (transcriber_spec.has_value() == hypotheses.has_value()) {
    throw ConfigError("give exactly one of a transcriber spec or a hypotheses file");
  }
  if (out_dir.empty()) throw ConfigError("an output directory is required");
  parse_strata(strata);
}

int RunResult::exit_code() const {
  if (aborted) return 1;
  return failures + missing == 0 ? 0 : 2;
}

// -- scoring -------------------------------------------------------------------

std::vector<SemanticRecord> semantic_records(const std::vector<UtteranceOutcome>& outcomes,
                                             EmbeddingProvider& provider) {
  std::vector<SemanticRecord> out;
  for (const auto& o : outcomes) {
    if (!o.scored()) continue;
    const EmbeddingRequest requests[] = {{o.utterance_id + "#ref", word_tokens(o.ref_norm)},
                                         {o.utterance_id + "#hyp", word_tokens(o.hyp_norm)}};
    try {
      const auto m = request_embeddings(requests, provider);
      const SemanticScore s = greedy_match_score(m[0].cast<double>(), m[1].cast<double>());
      out.push_back({o.utterance_id, s.precision, s.recall, s.f1_scaled, s.degenerate, requests[0].tokens.size()});
    } catch (const std::runtime_error& e) {
      throw StageError("semantic", o.utterance_id, e.what());
    }
  }
  return out;
}

Evaluation evaluate(const Manifest& manifest, const std::vector<Hypothesis>& hyps,
                    const std::vector<TimingRecord>& timings, const NormalizationProfile& profile,
                    const EvaluationOptions& options) {
  std::unordered_map<std::string, const Hypothesis*> by_id;
  for (const auto& h : hyps) {
    if (!by_id.emplace(h.utterance_id, &h).second) {
      throw ConfigError("more than one hypothesis for '" + h.utterance_id + "'");
    }
  }

  Evaluation ev;
  std::size_t norm_warnings = 0;
  for (const auto& u : manifest.records()) {
    auto it = by_id.find(u.id);
    try {
      ev.outcomes.push_back(score_utterance(u, it == by_id.end() ? nullptr : it->second, profile));
    } catch (const std::exception& e) {
      throw StageError("normalize", u.id, e.what());
    }
    norm_warnings += ev.outcomes.back().warnings.size();
  }
  if (options.provider) ev.semantic = semantic_records(ev.outcomes, *options.provider);

  ReportInputs in;
  in.model_id = options.model_id;
  in.profile = std::string(to_string(profile.name()));
  in.profile_fingerprint = profile.fingerprint();
  if (options.provider) in.provider_id = options.provider->id();
  in.strata = options.strata;
  in.outcomes = ev.outcomes;
  in.timings = timings;
  in.semantic = ev.semantic;
  if (norm_warnings) {
    in.warnings.push_back(std::to_string(norm_warnings) + " normalization warning(s); see alignments.jsonl");
  }
  if (const auto missing = missing_coverage(manifest, hyps); !missing.empty()) {
    in.warnings.push_back(std::to_string(missing.size()) + " of " + std::to_string(manifest.size()) +
                          " utterance(s) not covered");
  }
  ev.report = build_report(in);
  return ev;
}

// -- run -----------------------------------------------------------------------

namespace {

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw StageError("write", "", "cannot write " + path.string());
  out << content;
}

template <typename F>
void write_stream(const fs::path& path, F&& f) {
  std::ostringstream buf;
  f(buf);
  write_file(path, buf.str());
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

HypothesisSet acquire_hypotheses(const RunConfig& config, const Manifest& manifest, const TranscriberFactory& factory) {
  HypothesisSet set;
  if (config.transcriber_spec) {
    TranscriberSpec spec = load_transcriber_spec(*config.transcriber_spec);
    if (config.prompt_id) spec.prompt_id = config.prompt_id;
    set.model_id = spec.id;
    auto transcriber = factory ? factory(spec, manifest) : make_transcriber(spec, manifest);
    TranscriptionRun run = transcribe_all(*transcriber, manifest);
    set.hypotheses = std::move(run.hypotheses);
    set.timings = std::move(run.timings);
    set.errors = std::move(run.errors);
    set.failures = run.failures;
    set.aborted = run.aborted;
    return set;
  }

  set.model_id = config.hypotheses->stem().string();
  std::map<std::string, std::set<std::string>> prompts_of;
  for (auto& h : load_hypotheses(*config.hypotheses, manifest)) {
    if (config.prompt_id && h.prompt_id != config.prompt_id) continue;
    prompts_of[h.utterance_id].insert(h.prompt_id.value_or(""));
    if (h.failed) {
      ++set.failures;
    } else if (h.wall_time_s) {
      set.timings.push_back({h.utterance_id, *h.wall_time_s, {"inference"}, {}});
    }
    set.hypotheses.push_back(std::move(h));
  }
  for (const auto& [id, prompts] : prompts_of) {
    if (prompts.size() > 1) {
      throw ConfigError("hypotheses for '" + id + "' carry several prompt ids; select one with --prompt-id");
    }
  }
  return set;
}

std::unique_ptr<EmbeddingProvider> open_provider(const RunConfig& config) {
  auto provider = make_provider(config.provider, config.seed);
  if (config.cache_dir) return std::make_unique<CachingProvider>(std::move(provider), *config.cache_dir);
  return provider;
}

RunResult run_pipeline(const RunConfig& config, const TranscriberFactory& factory) {
  config.validate();
  const std::string started = utc_now();
  Manifest manifest;
  try {
    manifest = load_manifest(config.manifest);
  } catch (const std::exception& e) {
    throw StageError("data", "", e.what());
  }
  const NormalizationProfile profile = NormalizationProfile::named(config.profile);
  fs::create_directories(config.out_dir);

  HypothesisSet set = acquire_hypotheses(config, manifest, factory);
  const std::string model_id = config.model_id.empty() ? set.model_id : config.model_id;
  write_stream(config.out_dir / "hyps.jsonl", [&](std::ostream& o) { write_hypotheses(o, set.hypotheses); });
  write_stream(config.out_dir / "timings.jsonl", [&](std::ostream& o) { write_timings(o, set.timings); });

  std::unique_ptr<EmbeddingProvider> provider;
  if (config.semantic) provider = open_provider(config);

  EvaluationOptions options{model_id, config.strata, provider.get()};
  Evaluation ev = evaluate(manifest, set.hypotheses, set.timings, profile, options);
  if (set.aborted) {
    ev.report.warnings.push_back("run aborted after " + std::to_string(kMaxConsecutiveFailures) +
                                 " consecutive transcription failures");
  }

  write_stream(config.out_dir / "alignments.jsonl", [&](std::ostream& o) { write_outcomes(o, ev.outcomes); });
  if (ev.semantic) {
    write_stream(config.out_dir / "semantic.jsonl", [&](std::ostream& o) { write_semantic(o, *ev.semantic); });
  }
  write_file(config.out_dir / "report.json", report_to_json(ev.report));
  write_file(config.out_dir / "report.csv", render_report({ev.report}, ReportFormat::csv));
  write_file(config.out_dir / "report.md", render_report({ev.report}, ReportFormat::markdown));

  RunResult result;
  result.report = ev.report;
  result.failures = set.failures;
  result.aborted = set.aborted;
  result.errors = set.errors;
  for (const auto& o : ev.outcomes) result.missing += o.status == OutcomeStatus::missing ? 1 : 0;

  json meta;
  meta["tool"] = "asreval";
  meta["version"] = kToolVersion;
  meta["started_at"] = started;
  meta["finished_at"] = utc_now();
  meta["model_id"] = model_id;
  meta["manifest"] = config.manifest.string();
  if (config.transcriber_spec) meta["transcriber_spec"] = config.transcriber_spec->string();
  if (config.hypotheses) meta["hypotheses"] = config.hypotheses->string();
  meta["profile"] = to_string(profile.name());
  meta["profile_fingerprint"] = profile.fingerprint();
  meta["provider_id"] = provider ? json(provider->id()) : json(nullptr);
  meta["seed"] = config.seed;
  meta["strata"] = config.strata;
  meta["aggregation"] = "micro: counts summed over utterances, then divided";
  meta["rtf_note"] = "one wall time per utterance; for remote services it includes any queueing on the server side";
  meta["failures"] = result.failures;
  meta["missing"] = result.missing;
  meta["aborted"] = result.aborted;
  meta["errors"] = result.errors;
  write_file(config.out_dir / "run_meta.json", meta.dump(2) + "\n");
  return result;
}

// -- verify --------------------------------------------------------------------

VerifyResult verify_run(const fs::path& run_dir) {
  VerifyResult v;
  auto fail = [&](std::string msg) { v.discrepancies.push_back(std::move(msg)); };

  const MetricReport stored = report_from_json(read_file(run_dir / "report.json"));
  std::istringstream align_in(read_file(run_dir / "alignments.jsonl"));
  const auto outcomes = parse_outcomes(align_in, "alignments.jsonl");
  std::istringstream timing_in(read_file(run_dir / "timings.jsonl"));
  const auto timings = parse_timings(timing_in, "timings.jsonl");
  std::optional<std::vector<SemanticRecord>> semantic;
  if (fs::exists(run_dir / "semantic.jsonl")) {
    std::istringstream sem_in(read_file(run_dir / "semantic.jsonl"));
    semantic = parse_semantic(sem_in, "semantic.jsonl");
  }
  if (stored.provider_id.has_value() != semantic.has_value()) {
    fail("semantic.jsonl presence does not match the report's provider id");
  }

  const auto profile_name = parse_profile_name(stored.profile);
  if (!profile_name) {
    fail("unknown profile '" + stored.profile + "'");
    return v;
  }
  const NormalizationProfile profile = NormalizationProfile::named(*profile_name);
  if (profile.fingerprint() != stored.profile_fingerprint) fail("profile fingerprint differs from this build");

  std::vector<UtteranceRecord> records;
  for (const auto& o : outcomes) records.push_back(o.as_record());
  const Manifest manifest(records);
  std::istringstream hyp_in(read_file(run_dir / "hyps.jsonl"));
  std::unordered_map<std::string, Hypothesis> hyp_of;
  for (auto& h : parse_hypotheses(hyp_in, "hyps.jsonl", manifest)) hyp_of.emplace(h.utterance_id, std::move(h));

  for (const auto& o : outcomes) {
    ++v.utterances_checked;
    const std::string at = "utterance '" + o.utterance_id + "': ";
    if (o.ref_fingerprint != stored.profile_fingerprint) fail(at + "reference normalized with another profile");
    auto h = hyp_of.find(o.utterance_id);
    const OutcomeStatus expected = h == hyp_of.end()      ? OutcomeStatus::missing
                                   : h->second.failed ? OutcomeStatus::failed
                                                      : OutcomeStatus::ok;
    if (o.status != expected) fail(at + "status " + std::string(to_string(o.status)) + " disagrees with hyps.jsonl");
    if (!o.scored()) continue;
    if (o.hyp_fingerprint != o.ref_fingerprint) fail(at + "hypothesis and reference profiles differ");
    if (h != hyp_of.end() && normalize(h->second.text, profile).text != o.hyp_norm) {
      fail(at + "stored hypothesis normalization does not reproduce");
    }
    if (align_words(o.ref_norm, o.hyp_norm) != o.words) fail(at + "word alignment counts do not reproduce");
    if (align_chars(o.ref_norm, o.hyp_norm) != o.chars) fail(at + "character alignment counts do not reproduce");
  }

  ReportInputs in;
  in.model_id = stored.model_id;
  in.profile = stored.profile;
  in.profile_fingerprint = stored.profile_fingerprint;
  in.provider_id = stored.provider_id;
  in.strata = stored.strata;
  in.outcomes = outcomes;
  in.timings = timings;
  in.semantic = semantic;
  in.warnings = stored.warnings;
  MetricReport rebuilt;
  try {
    rebuilt = build_report(in);
  } catch (const std::exception& e) {
    fail(std::string("cannot rebuild report: ") + e.what());
    return v;
  }

  if (rebuilt.rows.size() != stored.rows.size()) {
    fail("row count " + std::to_string(rebuilt.rows.size()) + " != stored " + std::to_string(stored.rows.size()));
  } else {
    for (std::size_t i = 0; i < rebuilt.rows.size(); ++i) {
      const MetricRow& a = rebuilt.rows[i];
      const MetricRow& b = stored.rows[i];
      const std::string at = "row " + (a.by.empty() ? std::string("overall") : a.by) + "/" + a.label + ": ";
      auto cmp = [&](const char* name, std::optional<double> x, std::optional<double> y) {
        if (x != y) fail(at + name + " " + format_number(x) + " != stored " + format_number(y));
      };
      if (a.by != b.by || a.label != b.label) fail(at + "stratum differs from stored " + b.by + "/" + b.label);
      cmp("wer_pct", a.metrics.wer_pct, b.metrics.wer_pct);
      cmp("cer_pct", a.metrics.cer_pct, b.metrics.cer_pct);
      cmp("rtf_pct", a.rtf_pct, b.rtf_pct);
      cmp("bert_f1", a.bert_f1, b.bert_f1);
      cmp("dir", a.metrics.dir, b.metrics.dir);
      cmp("skip_corrected_wer_pct", a.metrics.skip_corrected_wer_pct, b.metrics.skip_corrected_wer_pct);
    }
  }
  if (report_to_json(rebuilt) != read_file(run_dir / "report.json")) fail("report.json does not reproduce");
  if (render_report({rebuilt}, ReportFormat::csv) != read_file(run_dir / "report.csv")) {
    fail("report.csv does not reproduce");
  }
  if (render_report({rebuilt}, ReportFormat::markdown) != read_file(run_dir / "report.md")) {
    fail("report.md does not reproduce");
  }
  return v;
}

// -- normalization impact ------------------------------------------------------

std::vector<ImpactRow> normalization_impact(const Manifest& manifest, const std::vector<Hypothesis>& hyps,
                                            EmbeddingProvider* provider) {
  std::vector<ImpactRow> rows;
  for (ProfileName p : {ProfileName::basic, ProfileName::whisper}) {
    const NormalizationProfile profile = NormalizationProfile::named(p);
    const Evaluation ev = evaluate(manifest, hyps, {}, profile, {"", "", provider});
    rows.push_back({std::string(to_string(p)), ev.report.overall().metrics.wer_pct, ev.report.overall().bert_f1});
  }
  return rows;
}

std::string render_impact(const std::vector<ImpactRow>& rows, ReportFormat format) {
  std::ostringstream out;
  auto fixed2 = [](std::optional<double> v) {
    if (!v) return std::string("nan");
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", *v);
    return std::string(buf);
  };
  switch (format) {
    case ReportFormat::markdown:
      out << "| Normalization | %WER | BERT F1 |\n| --- | ---: | ---: |\n";
      for (const auto& r : rows) out << "| " << r.profile << " | " << fixed2(r.wer_pct) << " | " << fixed2(r.bert_f1) << " |\n";
      break;
    case ReportFormat::csv:
      out << "normalization,wer_pct,bert_f1\n";
      for (const auto& r : rows) out << r.profile << ',' << format_number(r.wer_pct) << ',' << format_number(r.bert_f1) << '\n';
      break;
    case ReportFormat::json: {
      json arr = json::array();
      for (const auto& r : rows) {
        json j;
        j["normalization"] = r.profile;
        j["wer_pct"] = r.wer_pct ? json(*r.wer_pct) : json(nullptr);
        j["bert_f1"] = r.bert_f1 ? json(*r.bert_f1) : json(nullptr);
        arr.push_back(std::move(j));
      }
      out << arr.dump(2) << '\n';
      break;
    }
  }
  return out.str();
}

}  // namespace asreval
