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

#include "asreval/prompt_sweep.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace asreval {

using json = nlohmann::ordered_json;

SweepReport prompt_sweep(const TranscriberSpec& spec, const std::vector<std::string>& prompts,
                         const Manifest& dev_manifest, const NormalizationProfile& profile,
                         const TranscriberFactory& factory) {
  if (prompts.size() < 2) throw SweepError("a prompt sweep needs at least two prompts");
  if (!spec.prompt_capable()) {
    throw SweepError("transcriber '" + spec.id + "' (" + std::string(to_string(spec.kind)) + ") takes no prompt");
  }

  SweepReport report;
  report.model_id = spec.id;
  report.profile = std::string(to_string(profile.name()));
  std::vector<PromptResult> results;
  for (std::size_t i = 0; i < prompts.size(); ++i) {
    TranscriberSpec s = spec;
    s.prompt = prompts[i];
    s.prompt_id = "p" + std::to_string(i + 1);
    auto transcriber = factory ? factory(s, dev_manifest) : make_transcriber(s, dev_manifest);
    TranscriptionRun run = transcribe_all(*transcriber, dev_manifest);

    PromptResult r;
    r.index = i;
    r.prompt_id = *s.prompt_id;
    r.prompt = prompts[i];
    r.failures = run.failures;
    r.aborted = run.aborted;
    r.excluded = run.failures == run.hypotheses.size();
    if (!r.excluded) {
      const Evaluation ev = evaluate(dev_manifest, run.hypotheses, run.timings, profile, {spec.id, "", nullptr});
      r.wer_pct = ev.report.overall().metrics.wer_pct;
    }
    if (r.excluded) {
      report.warnings.push_back("prompt " + r.prompt_id + " excluded: every utterance failed");
    } else if (r.failures) {
      report.warnings.push_back("prompt " + r.prompt_id + ": " + std::to_string(r.failures) + " failed utterance(s)" +
                                (r.aborted ? ", run aborted" : ""));
    }
    results.push_back(std::move(r));
  }

  std::stable_sort(results.begin(), results.end(), [](const PromptResult& a, const PromptResult& b) {
    const bool ua = a.excluded || !a.wer_pct;
    const bool ub = b.excluded || !b.wer_pct;
    if (ua != ub) return ub;
    if (!ua && *a.wer_pct != *b.wer_pct) return *a.wer_pct < *b.wer_pct;
    return a.index < b.index;
  });
  if (results.front().excluded || !results.front().wer_pct) throw SweepError("every prompt failed");
  report.ranked = std::move(results);
  report.selected = 0;
  return report;
}

std::vector<std::string> load_prompts(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SweepError("cannot open prompt list " + path.string());
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") != std::string::npos) out.push_back(line);
  }
  return out;
}

std::string render_sweep(const SweepReport& report, ReportFormat format) {
  std::ostringstream out;
  auto wer_text = [&](const PromptResult& r, bool fixed) {
    if (r.excluded) return std::string("excluded");
    if (!fixed || !r.wer_pct) return format_number(r.wer_pct);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", *r.wer_pct);
    return std::string(buf);
  };
  switch (format) {
    case ReportFormat::markdown:
      out << "| # | Prompt | %WER |\n| ---: | --- | ---: |\n";
      for (std::size_t i = 0; i < report.ranked.size(); ++i) {
        const PromptResult& r = report.ranked[i];
        std::string prompt = r.prompt;
        for (std::size_t p = 0; (p = prompt.find('|', p)) != std::string::npos; p += 2) prompt.replace(p, 1, "\\|");
        out << "| " << r.index + 1 << " | " << prompt << (i == report.selected ? " (selected)" : "") << " | "
            << wer_text(r, true) << " |\n";
      }
      break;
    case ReportFormat::csv:
      out << "rank,prompt_index,prompt_id,wer_pct,failures,excluded,selected,prompt\n";
      for (std::size_t i = 0; i < report.ranked.size(); ++i) {
        const PromptResult& r = report.ranked[i];
        std::string quoted = "\"";
        for (char c : r.prompt) quoted += c == '"' ? std::string("\"\"") : std::string(1, c);
        quoted += '"';
        out << i + 1 << ',' << r.index + 1 << ',' << r.prompt_id << ',' << wer_text(r, false) << ',' << r.failures
            << ',' << (r.excluded ? "true" : "false") << ',' << (i == report.selected ? "true" : "false") << ','
            << quoted << '\n';
      }
      break;
    case ReportFormat::json: {
      json j;
      j["model_id"] = report.model_id;
      j["profile"] = report.profile;
      j["selected"] = report.best().prompt_id;
      json arr = json::array();
      for (const auto& r : report.ranked) {
        json x;
        x["prompt_index"] = r.index + 1;
        x["prompt_id"] = r.prompt_id;
        x["prompt"] = r.prompt;
        x["wer_pct"] = r.wer_pct ? json(*r.wer_pct) : json(nullptr);
        x["failures"] = r.failures;
        x["aborted"] = r.aborted;
        x["excluded"] = r.excluded;
        arr.push_back(std::move(x));
      }
      j["ranked"] = std::move(arr);
      j["warnings"] = report.warnings;
      out << j.dump(2) << '\n';
      break;
    }
  }
  return out.str();
}

}  // namespace asreval
