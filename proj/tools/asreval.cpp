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

// asreval: evaluate French ASR output.
//
//   asreval run --manifest m.jsonl --transcriber spec.json --out runs/x
//   asreval score --manifest m.jsonl --hyps hyps.jsonl --semantic --out runs/x
//   asreval normalize --profile basic "L'école du 2e étage"
//   asreval normalize --profile whisper --in refs.txt --out refs.norm.txt
//   asreval sweep --manifest dev.jsonl --transcriber spec.json --prompts prompts.txt
//   asreval report runs/a runs/b --format markdown [--scatter]
//   asreval verify runs/x
//   asreval join-external --external fleurs.csv runs/a runs/b
//
// Exit status: 0 success, 1 error, 2 some utterances failed or were missing.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "asreval/benchmark_join.hpp"
#include "asreval/normalizer.hpp"
#include "asreval/pipeline.hpp"
#include "asreval/prompt_sweep.hpp"

namespace {

using namespace asreval;
namespace fs = std::filesystem;

constexpr int kExitError = 1;

struct CommonRunOptions {
  std::string manifest;
  std::string profile = "basic";
  std::string strata;
  bool semantic = false;
  std::string provider = "deterministic";
  std::uint64_t seed = 0;
  std::string cache_dir;
  std::string out;
  std::string model_id;
  std::string prompt_id;
  bool impact = false;
};

void add_common(CLI::App* cmd, CommonRunOptions& o) {
  cmd->add_option("--manifest,--refs", o.manifest, "Utterance manifest (JSONL)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--profile", o.profile, "Normalization profile")
      ->check(CLI::IsMember({"basic", "whisper"}))
      ->capture_default_str();
  cmd->add_option("--strata,--by", o.strata, "Strata, e.g. \"gender,dataset+split\"");
  cmd->add_flag("--semantic", o.semantic, "Compute Bert F1");
  cmd->add_option("--provider", o.provider,
                  "Embedding provider: deterministic[:dim], subprocess:<command>, replay:<dir>")
      ->capture_default_str();
  cmd->add_option("--seed", o.seed, "Seed of the deterministic provider")->capture_default_str();
  cmd->add_option("--cache-dir", o.cache_dir, "Embedding cache directory")->envname("ASREVAL_CACHE_DIR");
  cmd->add_option("--out", o.out, "Run directory")->required();
  cmd->add_option("--model-id", o.model_id, "Model id shown in reports");
  cmd->add_option("--prompt-id", o.prompt_id, "Use only hypotheses with this prompt id");
  cmd->add_flag("--impact", o.impact, "Also compare the basic and whisper profiles (impact.md)");
}

RunConfig to_config(const CommonRunOptions& o) {
  RunConfig c;
  c.manifest = o.manifest;
  c.profile = *parse_profile_name(o.profile);
  c.strata = o.strata;
  c.semantic = o.semantic;
  c.provider = o.provider;
  c.seed = o.seed;
  if (!o.cache_dir.empty()) c.cache_dir = o.cache_dir;
  c.out_dir = o.out;
  c.model_id = o.model_id;
  if (!o.prompt_id.empty()) c.prompt_id = o.prompt_id;
  return c;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<MetricReport> load_reports(const std::vector<std::string>& run_dirs) {
  std::vector<MetricReport> reports;
  for (const auto& dir : run_dirs) {
    const fs::path p = fs::is_directory(dir) ? fs::path(dir) / "report.json" : fs::path(dir);
    reports.push_back(report_from_json(slurp(p)));
  }
  return reports;
}

int do_run(const CommonRunOptions& o, RunConfig config) {
  RunResult result = run_pipeline(config);
  std::cout << render_report({result.report}, ReportFormat::markdown);
  for (const auto& e : result.errors) std::cerr << "asreval: " << e << '\n';
  for (const auto& w : result.report.warnings) std::cerr << "asreval: warning: " << w << '\n';

  if (o.impact) {
    const Manifest manifest = load_manifest(config.manifest);
    std::ifstream hyps_in(config.out_dir / "hyps.jsonl");
    const auto hyps = parse_hypotheses(hyps_in, "hyps.jsonl", manifest);
    std::unique_ptr<EmbeddingProvider> provider;
    if (config.semantic) provider = open_provider(config);
    const auto rows = normalization_impact(manifest, hyps, provider.get());
    const std::string table = render_impact(rows, ReportFormat::markdown);
    std::ofstream(config.out_dir / "impact.md") << table;
    std::cout << '\n' << table;
  }
  return result.exit_code();
}

// Line-by-line. With --out, warnings go to OUT.warnings as "line<TAB>text".
int do_normalize(const std::string& profile_name, const std::vector<std::string>& texts, const std::string& in_path,
                 const std::string& out_path) {
  const NormalizationProfile profile = NormalizationProfile::named(*parse_profile_name(profile_name));
  std::ofstream out_file, warn_file;
  if (!out_path.empty()) {
    out_file.open(out_path, std::ios::binary);
    warn_file.open(out_path + ".warnings", std::ios::binary);
    if (!out_file || !warn_file) throw std::runtime_error("cannot write " + out_path);
  }
  std::ostream& out = out_path.empty() ? std::cout : out_file;
  std::size_t lineno = 0;
  auto one = [&](const std::string& text) {
    ++lineno;
    NormalizationResult r = normalize(text, profile);
    out << r.text << '\n';
    for (const auto& w : r.warnings) {
      if (warn_file.is_open()) {
        warn_file << lineno << '\t' << w << '\n';
      } else {
        std::cerr << "asreval: warning: line " << lineno << ": " << w << '\n';
      }
    }
  };
  auto lines = [&](std::istream& in) {
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      one(line);
    }
  };
  if (!in_path.empty()) {
    std::ifstream in(in_path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + in_path);
    lines(in);
  } else if (texts.empty()) {
    lines(std::cin);
  } else {
    for (const auto& t : texts) one(t);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"French ASR evaluation: WER, CER, DIR, RTF and Bert F1 with stratified reports"};
  app.require_subcommand(1);

  CommonRunOptions run_opts;
  std::string transcriber;
  auto* run = app.add_subcommand("run", "Transcribe a manifest and score it");
  add_common(run, run_opts);
  run->add_option("--transcriber", transcriber, "Transcriber spec (JSON)")->required()->check(CLI::ExistingFile);

  CommonRunOptions score_opts;
  std::string hyps;
  auto* score = app.add_subcommand("score", "Score an existing hypothesis file");
  add_common(score, score_opts);
  score->add_option("--hyps", hyps, "Hypotheses (JSONL)")->required()->check(CLI::ExistingFile);

  std::string norm_profile = "basic";
  std::vector<std::string> norm_texts;
  std::string norm_in, norm_out;
  auto* norm = app.add_subcommand("normalize", "Normalize text arguments, or stdin lines");
  norm->add_option("--profile", norm_profile)->check(CLI::IsMember({"basic", "whisper"}))->capture_default_str();
  norm->add_option("text", norm_texts);
  norm->add_option("--in", norm_in, "Input file, one text per line")->check(CLI::ExistingFile)->excludes("text");
  norm->add_option("--out", norm_out, "Output file; warnings go to OUT.warnings");

  std::string sweep_manifest, sweep_spec, sweep_prompts, sweep_profile = "basic", sweep_format = "markdown",
                                                         sweep_out;
  auto* sweep = app.add_subcommand("sweep", "Evaluate several prompts on a dev manifest and pick the best");
  sweep->add_option("--manifest", sweep_manifest)->required()->check(CLI::ExistingFile);
  sweep->add_option("--transcriber", sweep_spec)->required()->check(CLI::ExistingFile);
  sweep->add_option("--prompts", sweep_prompts, "One prompt per line")->required()->check(CLI::ExistingFile);
  sweep->add_option("--profile", sweep_profile)->check(CLI::IsMember({"basic", "whisper"}))->capture_default_str();
  sweep->add_option("--format", sweep_format)->check(CLI::IsMember({"csv", "markdown", "md", "json"}));
  sweep->add_option("--out", sweep_out, "Also write the report here");

  std::vector<std::string> report_runs;
  std::string report_format = "markdown";
  bool scatter = false;
  auto* report = app.add_subcommand("report", "Combine run reports into one table");
  report->add_option("runs", report_runs, "Run directories or report.json files")->required();
  report->add_option("--format", report_format)->check(CLI::IsMember({"csv", "markdown", "md", "json"}));
  report->add_flag("--scatter", scatter, "Emit (model, rtf_pct, wer_pct) points instead");

  std::string verify_dir;
  auto* verify = app.add_subcommand("verify", "Re-derive a run's aggregates from its records");
  verify->add_option("run", verify_dir)->required()->check(CLI::ExistingDirectory);

  std::vector<std::string> join_runs;
  std::string join_external, join_format = "markdown";
  auto* join = app.add_subcommand("join-external", "Compare local WER ranks with external benchmarks");
  join->add_option("--external", join_external, "CSV model,benchmark,wer_pct")->required()->check(CLI::ExistingFile);
  join->add_option("runs", join_runs)->required();
  join->add_option("--format", join_format)->check(CLI::IsMember({"csv", "markdown", "md", "json"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      RunConfig c = to_config(run_opts);
      c.transcriber_spec = transcriber;
      return do_run(run_opts, c);
    }
    if (*score) {
      RunConfig c = to_config(score_opts);
      c.hypotheses = hyps;
      return do_run(score_opts, c);
    }
    if (*norm) return do_normalize(norm_profile, norm_texts, norm_in, norm_out);
    if (*sweep) {
      const Manifest manifest = load_manifest(sweep_manifest);
      const TranscriberSpec spec = load_transcriber_spec(sweep_spec);
      const SweepReport r = prompt_sweep(spec, load_prompts(sweep_prompts), manifest,
                                         NormalizationProfile::named(*parse_profile_name(sweep_profile)));
      const std::string text = render_sweep(r, *parse_report_format(sweep_format));
      std::cout << text;
      if (!sweep_out.empty()) std::ofstream(sweep_out) << text;
      for (const auto& w : r.warnings) std::cerr << "asreval: warning: " << w << '\n';
      return 0;
    }
    if (*report) {
      const auto reports = load_reports(report_runs);
      if (scatter) {
        std::vector<std::string> warnings;
        std::cout << render_scatter_csv(scatter_data(reports, &warnings));
        for (const auto& w : warnings) std::cerr << "asreval: warning: " << w << '\n';
      } else {
        std::cout << render_report(reports, *parse_report_format(report_format));
      }
      return 0;
    }
    if (*verify) {
      const VerifyResult v = verify_run(verify_dir);
      for (const auto& d : v.discrepancies) std::cout << "MISMATCH " << d << '\n';
      std::cout << v.utterances_checked << " utterances checked, " << v.discrepancies.size() << " discrepancies\n";
      return v.ok() ? 0 : kExitError;
    }
    if (*join) {
      const auto j = external_benchmark_join(load_reports(join_runs), load_external_results(join_external));
      std::cout << render_join(j, *parse_report_format(join_format));
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "asreval: error: " << e.what() << '\n';
    return kExitError;
  }
  return 0;
}
