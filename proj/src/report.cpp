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

#include "asreval/report.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "asreval/semantic_score.hpp"
#include "json.hpp"

namespace asreval {

using json = nlohmann::ordered_json;

std::string_view to_string(OutcomeStatus s) {
  switch (s) {
    case OutcomeStatus::ok: return "ok";
    case OutcomeStatus::failed: return "failed";
    case OutcomeStatus::missing: return "missing";
  }
  return "?";
}

UtteranceRecord UtteranceOutcome::as_record() const {
  UtteranceRecord r;
  r.id = utterance_id;
  r.duration_s = duration_s;
  r.speaker_id = speaker_id;
  r.gender = gender;
  r.dataset = dataset;
  r.split = split;
  return r;
}

UtteranceOutcome score_utterance(const UtteranceRecord& u, const Hypothesis* h, const NormalizationProfile& profile) {
  UtteranceOutcome o;
  o.utterance_id = u.id;
  o.duration_s = u.duration_s;
  o.speaker_id = u.speaker_id;
  o.gender = u.gender;
  o.dataset = u.dataset;
  o.split = u.split;

  const std::string fingerprint = profile.fingerprint();
  NormalizationResult ref = normalize(u.reference, profile);
  o.ref_norm = std::move(ref.text);
  o.ref_fingerprint = fingerprint;
  for (auto& w : ref.warnings) o.warnings.push_back("ref: " + w);

  if (!h) {
    o.status = OutcomeStatus::missing;
    return o;
  }
  if (h->failed) {
    o.status = OutcomeStatus::failed;
    return o;
  }
  NormalizationResult hyp = normalize(h->text, profile);
  o.hyp_norm = std::move(hyp.text);
  o.hyp_fingerprint = fingerprint;
  for (auto& w : hyp.warnings) o.warnings.push_back("hyp: " + w);
  o.words = align_words(o.ref_norm, o.hyp_norm);
  o.chars = align_chars(o.ref_norm, o.hyp_norm);
  o.status = OutcomeStatus::ok;
  return o;
}

MetricReport build_report(const ReportInputs& in) {
  std::vector<UtteranceRecord> records;
  records.reserve(in.outcomes.size());
  for (const auto& o : in.outcomes) records.push_back(o.as_record());
  const Manifest manifest(std::move(records));
  const auto strata = parse_strata(in.strata);

  std::unordered_map<std::string, const TimingRecord*> timing_of;
  for (const auto& t : in.timings) {
    if (!manifest.find(t.utterance_id)) {
      throw std::invalid_argument("timing for unknown utterance '" + t.utterance_id + "'");
    }
    timing_of[t.utterance_id] = &t;
  }
  std::unordered_map<std::string, const SemanticRecord*> semantic_of;
  if (in.semantic) {
    for (const auto& s : *in.semantic) semantic_of[s.utterance_id] = &s;
  }

  MetricReport r;
  r.model_id = in.model_id;
  r.profile = in.profile;
  r.profile_fingerprint = in.profile_fingerprint;
  r.provider_id = in.provider_id;
  r.strata = in.strata;
  r.requested = in.outcomes.size();
  r.warnings = in.warnings;
  for (const auto& o : in.outcomes) r.scored += o.scored() ? 1 : 0;

  for (const auto& g : group_utterances(manifest, strata)) {
    MetricRow row;
    row.by = g.by;
    row.label = g.label;
    AlignmentTotals words;
    AlignmentTotals chars;
    std::vector<TimingRecord> timings;
    std::vector<SemanticScore> scores;
    std::vector<double> weights;
    for (std::size_t i : g.members) {
      const UtteranceOutcome& o = in.outcomes[i];
      if (!o.scored()) continue;
      ++row.utterances;
      words += o.words;
      chars += o.chars;
      if (auto it = timing_of.find(o.utterance_id); it != timing_of.end()) timings.push_back(*it->second);
      if (auto it = semantic_of.find(o.utterance_id); it != semantic_of.end()) {
        const SemanticRecord& s = *it->second;
        scores.push_back({s.precision, s.recall, s.f1_scaled, s.degenerate});
        weights.push_back(static_cast<double>(s.ref_tokens));
      }
    }
    row.metrics = aggregate(words, chars);
    row.rtf_pct = rtf(timings, manifest);
    if (in.semantic) row.bert_f1 = score_run(scores, weights);
    if (row.by == "gender" && row.label == "male") r.wer_male_pct = row.metrics.wer_pct;
    if (row.by == "gender" && row.label == "female") r.wer_female_pct = row.metrics.wer_pct;
    r.rows.push_back(std::move(row));
  }
  if (r.wer_male_pct && r.wer_female_pct && *r.wer_male_pct != 0.0) {
    r.gender_relative_delta_pct = (*r.wer_female_pct - *r.wer_male_pct) / *r.wer_male_pct * 100.0;
  }
  return r;
}

// -- jsonl records -------------------------------------------------------------

namespace {

json counts_to_json(std::uint64_t n_ref, std::uint64_t s, std::uint64_t i, std::uint64_t d, std::uint64_t c) {
  json j;
  j["n_ref"] = n_ref;
  j["substitutions"] = s;
  j["insertions"] = i;
  j["deletions"] = d;
  j["correct"] = c;
  return j;
}

json to_json(const AlignmentResult& a) {
  return counts_to_json(a.n_ref, a.substitutions, a.insertions, a.deletions, a.correct);
}

json to_json(const AlignmentTotals& a) {
  return counts_to_json(a.n_ref, a.substitutions, a.insertions, a.deletions, a.correct);
}

template <typename T>
void counts_from_json(const json& j, T& a) {
  a.n_ref = j.at("n_ref").get<std::uint64_t>();
  a.substitutions = j.at("substitutions").get<std::uint64_t>();
  a.insertions = j.at("insertions").get<std::uint64_t>();
  a.deletions = j.at("deletions").get<std::uint64_t>();
  a.correct = j.at("correct").get<std::uint64_t>();
}

json opt(std::optional<double> v) { return v ? json(*v) : json(nullptr); }

std::optional<double> opt_from(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return it->get<double>();
}

template <typename F>
void for_each_line(std::istream& in, const std::string& source_name, F&& f) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      f(json::parse(line));
    } catch (const json::exception& e) {
      throw LoadError(source_name, lineno, e.what());
    } catch (const std::invalid_argument& e) {
      throw LoadError(source_name, lineno, e.what());
    }
  }
}

}  // namespace

void write_outcomes(std::ostream& out, const std::vector<UtteranceOutcome>& outcomes) {
  for (const auto& o : outcomes) {
    json j;
    j["utterance_id"] = o.utterance_id;
    j["status"] = to_string(o.status);
    j["duration_s"] = o.duration_s;
    j["speaker_id"] = o.speaker_id;
    j["gender"] = to_string(o.gender);
    j["dataset"] = o.dataset;
    j["split"] = to_string(o.split);
    j["ref_norm"] = o.ref_norm;
    j["hyp_norm"] = o.hyp_norm;
    j["ref_fingerprint"] = o.ref_fingerprint;
    j["hyp_fingerprint"] = o.hyp_fingerprint;
    if (o.scored()) {
      j["words"] = to_json(o.words);
      j["chars"] = to_json(o.chars);
    }
    j["warnings"] = o.warnings;
    out << j.dump() << '\n';
  }
}

std::vector<UtteranceOutcome> parse_outcomes(std::istream& in, const std::string& source_name) {
  std::vector<UtteranceOutcome> out;
  for_each_line(in, source_name, [&](const json& j) {
    UtteranceOutcome o;
    o.utterance_id = j.at("utterance_id").get<std::string>();
    const auto status = j.at("status").get<std::string>();
    if (status == "ok") {
      o.status = OutcomeStatus::ok;
    } else if (status == "failed") {
      o.status = OutcomeStatus::failed;
    } else if (status == "missing") {
      o.status = OutcomeStatus::missing;
    } else {
      throw std::invalid_argument("unknown status '" + status + "'");
    }
    o.duration_s = j.at("duration_s").get<double>();
    o.speaker_id = j.at("speaker_id").get<std::string>();
    const auto gender = parse_gender(j.at("gender").get<std::string>());
    const auto split = parse_split(j.at("split").get<std::string>());
    if (!gender || !split) throw std::invalid_argument("invalid gender or split");
    o.gender = *gender;
    o.split = *split;
    o.dataset = j.at("dataset").get<std::string>();
    o.ref_norm = j.at("ref_norm").get<std::string>();
    o.hyp_norm = j.at("hyp_norm").get<std::string>();
    o.ref_fingerprint = j.at("ref_fingerprint").get<std::string>();
    o.hyp_fingerprint = j.at("hyp_fingerprint").get<std::string>();
    if (o.scored()) {
      counts_from_json(j.at("words"), o.words);
      counts_from_json(j.at("chars"), o.chars);
    }
    o.warnings = j.value("warnings", std::vector<std::string>{});
    out.push_back(std::move(o));
  });
  return out;
}

void write_semantic(std::ostream& out, const std::vector<SemanticRecord>& records) {
  for (const auto& s : records) {
    json j;
    j["utterance_id"] = s.utterance_id;
    j["precision"] = s.precision;
    j["recall"] = s.recall;
    j["f1_scaled"] = s.f1_scaled;
    j["degenerate"] = s.degenerate;
    j["ref_tokens"] = s.ref_tokens;
    out << j.dump() << '\n';
  }
}

std::vector<SemanticRecord> parse_semantic(std::istream& in, const std::string& source_name) {
  std::vector<SemanticRecord> out;
  for_each_line(in, source_name, [&](const json& j) {
    SemanticRecord s;
    s.utterance_id = j.at("utterance_id").get<std::string>();
    s.precision = j.at("precision").get<double>();
    s.recall = j.at("recall").get<double>();
    s.f1_scaled = j.at("f1_scaled").get<double>();
    s.degenerate = j.at("degenerate").get<bool>();
    s.ref_tokens = j.at("ref_tokens").get<std::size_t>();
    out.push_back(s);
  });
  return out;
}

// -- report documents ----------------------------------------------------------

std::string format_number(std::optional<double> v) {
  if (!v) return "nan";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, *v);
  return std::string(buf, end);
}

namespace {

std::string fixed2(std::optional<double> v) {
  if (!v) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", *v);
  return buf;
}

bool has_gender(const MetricReport& r) {
  for (const auto& def : parse_strata(r.strata)) {
    if (std::find(def.keys.begin(), def.keys.end(), "gender") != def.keys.end()) return true;
  }
  return false;
}

struct Column {
  std::string name;
  bool numeric;
};

struct Cell {
  std::string text;                // non-numeric columns
  std::optional<double> value;     // numeric columns
  bool blank = false;              // not applicable for this row
};

std::vector<const MetricReport*> ordered(const std::vector<MetricReport>& reports) {
  std::vector<const MetricReport*> out;
  for (const auto& r : reports) {
    if (r.rows.empty()) throw std::invalid_argument("report for '" + r.model_id + "' has no rows");
    out.push_back(&r);
  }
  std::stable_sort(out.begin(), out.end(), [](const MetricReport* a, const MetricReport* b) {
    const auto& wa = a->overall().metrics.wer_pct;
    const auto& wb = b->overall().metrics.wer_pct;
    if (wa.has_value() != wb.has_value()) return wa.has_value();
    if (wa && *wa != *wb) return *wa < *wb;
    return a->model_id < b->model_id;
  });
  return out;
}

void build_table(const std::vector<MetricReport>& reports, std::vector<Column>& cols,
                 std::vector<std::vector<Cell>>& rows) {
  const bool gender = std::any_of(reports.begin(), reports.end(), has_gender);
  cols = {{"model", false},   {"stratum", false}, {"group", false},   {"utterances", true},
          {"ref_words", true}, {"wer_pct", true},  {"cer_pct", true},  {"rtf_pct", true},
          {"bert_f1", true},   {"dir", true},      {"skip_corrected_wer_pct", true}};
  if (gender) {
    cols.push_back({"wer_male_pct", true});
    cols.push_back({"wer_female_pct", true});
    cols.push_back({"gender_rel_delta_pct", true});
  }
  for (const MetricReport* r : ordered(reports)) {
    for (const auto& row : r->rows) {
      const AggregateMetrics& m = row.metrics;
      std::vector<Cell> cells = {
          {r->model_id, {}},
          {row.by.empty() ? "overall" : row.by, {}},
          {row.label, {}},
          {{}, static_cast<double>(row.utterances)},
          {{}, static_cast<double>(m.words.n_ref)},
          {{}, m.wer_pct},
          {{}, m.cer_pct},
          {{}, row.rtf_pct},
          {{}, row.bert_f1},
          {{}, m.dir},
          {{}, m.skip_corrected_wer_pct},
      };
      if (gender) {
        const bool overall = row.by.empty();
        cells.push_back({{}, r->wer_male_pct, !overall});
        cells.push_back({{}, r->wer_female_pct, !overall});
        cells.push_back({{}, r->gender_relative_delta_pct, !overall});
      }
      rows.push_back(std::move(cells));
    }
  }
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string cell_text(const Column& col, const Cell& cell, bool markdown) {
  if (!col.numeric) return cell.text;
  if (cell.blank) return "";
  if (col.name == "dir" && !cell.value) return kUndefinedDir;
  if (col.name == "utterances" || col.name == "ref_words") return format_number(cell.value);
  return markdown ? fixed2(cell.value) : format_number(cell.value);
}

}  // namespace

std::optional<ReportFormat> parse_report_format(std::string_view s) {
  if (s == "csv") return ReportFormat::csv;
  if (s == "markdown" || s == "md") return ReportFormat::markdown;
  if (s == "json") return ReportFormat::json;
  return std::nullopt;
}

std::string render_report(const std::vector<MetricReport>& reports, ReportFormat format) {
  std::vector<Column> cols;
  std::vector<std::vector<Cell>> rows;
  build_table(reports, cols, rows);
  std::ostringstream out;

  switch (format) {
    case ReportFormat::csv:
      for (std::size_t c = 0; c < cols.size(); ++c) out << (c ? "," : "") << cols[c].name;
      out << '\n';
      for (const auto& row : rows) {
        for (std::size_t c = 0; c < cols.size(); ++c) {
          out << (c ? "," : "") << csv_field(cell_text(cols[c], row[c], false));
        }
        out << '\n';
      }
      break;

    case ReportFormat::markdown: {
      auto escape = [](std::string s) {
        for (std::size_t p = 0; (p = s.find('|', p)) != std::string::npos; p += 2) s.replace(p, 1, "\\|");
        return s;
      };
      out << '|';
      for (const auto& c : cols) out << ' ' << c.name << " |";
      out << "\n|";
      for (const auto& c : cols) out << (c.numeric ? " ---: |" : " --- |");
      out << '\n';
      for (const auto& row : rows) {
        out << '|';
        for (std::size_t c = 0; c < cols.size(); ++c) out << ' ' << escape(cell_text(cols[c], row[c], true)) << " |";
        out << '\n';
      }
      break;
    }

    case ReportFormat::json: {
      json arr = json::array();
      for (const auto& row : rows) {
        json j;
        for (std::size_t c = 0; c < cols.size(); ++c) {
          if (!cols[c].numeric) {
            j[cols[c].name] = row[c].text;
          } else if (row[c].blank) {
            j[cols[c].name] = nullptr;
          } else {
            j[cols[c].name] = opt(row[c].value);
          }
        }
        arr.push_back(std::move(j));
      }
      out << arr.dump(2) << '\n';
      break;
    }
  }
  return out.str();
}

std::string report_to_json(const MetricReport& r) {
  json j;
  j["model_id"] = r.model_id;
  j["profile"] = r.profile;
  j["profile_fingerprint"] = r.profile_fingerprint;
  j["provider_id"] = r.provider_id ? json(*r.provider_id) : json(nullptr);
  j["strata"] = r.strata;
  j["requested"] = r.requested;
  j["scored"] = r.scored;
  j["wer_male_pct"] = opt(r.wer_male_pct);
  j["wer_female_pct"] = opt(r.wer_female_pct);
  j["gender_relative_delta_pct"] = opt(r.gender_relative_delta_pct);
  json rows = json::array();
  for (const auto& row : r.rows) {
    json x;
    x["by"] = row.by;
    x["label"] = row.label;
    x["utterances"] = row.utterances;
    x["wer_pct"] = opt(row.metrics.wer_pct);
    x["cer_pct"] = opt(row.metrics.cer_pct);
    x["rtf_pct"] = opt(row.rtf_pct);
    x["bert_f1"] = opt(row.bert_f1);
    x["dir"] = opt(row.metrics.dir);
    x["skip_corrected_wer_pct"] = opt(row.metrics.skip_corrected_wer_pct);
    x["words"] = to_json(row.metrics.words);
    x["chars"] = to_json(row.metrics.chars);
    rows.push_back(std::move(x));
  }
  j["rows"] = std::move(rows);
  j["warnings"] = r.warnings;
  return j.dump(2) + "\n";
}

MetricReport report_from_json(const std::string& text) {
  MetricReport r;
  try {
    const json j = json::parse(text);
    r.model_id = j.at("model_id").get<std::string>();
    r.profile = j.at("profile").get<std::string>();
    r.profile_fingerprint = j.at("profile_fingerprint").get<std::string>();
    if (!j.at("provider_id").is_null()) r.provider_id = j["provider_id"].get<std::string>();
    r.strata = j.at("strata").get<std::string>();
    r.requested = j.at("requested").get<std::size_t>();
    r.scored = j.at("scored").get<std::size_t>();
    r.wer_male_pct = opt_from(j, "wer_male_pct");
    r.wer_female_pct = opt_from(j, "wer_female_pct");
    r.gender_relative_delta_pct = opt_from(j, "gender_relative_delta_pct");
    for (const auto& x : j.at("rows")) {
      MetricRow row;
      row.by = x.at("by").get<std::string>();
      row.label = x.at("label").get<std::string>();
      row.utterances = x.at("utterances").get<std::size_t>();
      row.metrics.wer_pct = opt_from(x, "wer_pct");
      row.metrics.cer_pct = opt_from(x, "cer_pct");
      row.rtf_pct = opt_from(x, "rtf_pct");
      row.bert_f1 = opt_from(x, "bert_f1");
      row.metrics.dir = opt_from(x, "dir");
      row.metrics.skip_corrected_wer_pct = opt_from(x, "skip_corrected_wer_pct");
      counts_from_json(x.at("words"), row.metrics.words);
      counts_from_json(x.at("chars"), row.metrics.chars);
      r.rows.push_back(std::move(row));
    }
    r.warnings = j.value("warnings", std::vector<std::string>{});
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed report: ") + e.what());
  }
  if (r.rows.empty()) throw std::invalid_argument("malformed report: no rows");
  return r;
}

std::vector<ScatterPoint> scatter_data(const std::vector<MetricReport>& reports, std::vector<std::string>* warnings) {
  std::vector<ScatterPoint> out;
  for (const auto& r : reports) {
    if (r.rows.empty()) continue;
    const MetricRow& row = r.overall();
    if (!row.rtf_pct || !row.metrics.wer_pct) {
      if (warnings) {
        warnings->push_back("model '" + r.model_id + "' has no " + (row.rtf_pct ? "WER" : "RTF") + "; excluded");
      }
      continue;
    }
    out.push_back({r.model_id, *row.rtf_pct, *row.metrics.wer_pct});
  }
  return out;
}

std::string render_scatter_csv(const std::vector<ScatterPoint>& points) {
  std::string out = "model,rtf_pct,wer_pct\n";
  for (const auto& p : points) {
    out += csv_field(p.model_id) + "," + format_number(p.rtf_pct) + "," + format_number(p.wer_pct) + "\n";
  }
  return out;
}

}  // namespace asreval
