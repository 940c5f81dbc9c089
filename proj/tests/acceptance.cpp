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


// acceptance: end-to-end checks with pinned tolerances.
//
//   acceptance [--only N]
//
// Prints one PASS/FAIL line per criterion and exits non-zero if any fails.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "asreval/align.hpp"
#include "asreval/embedding_provider.hpp"
#include "asreval/normalizer.hpp"
#include "asreval/number_fr.hpp"
#include "asreval/pipeline.hpp"
#include "asreval/prompt_sweep.hpp"
#include "asreval/semantic_score.hpp"
#include "asreval/unicode.hpp"
#include "oracles/edit_scripts.hpp"
#include "oracles/french_corpus.hpp"
#include "oracles/french_numbers.hpp"
#include "oracles/fuzz_text.hpp"
#include "sweep_stub.hpp"
#include "test_support.hpp"

using namespace asreval;
namespace fs = std::filesystem;

namespace {

// A criterion reports its outcome through `fail`; the first message wins.
struct Check {
  std::string failure;
  void fail(const std::string& what) {
    if (failure.empty()) failure = what;
  }
  void expect(bool ok, const std::string& what) {
    if (!ok) fail(what);
  }
};

using Criterion = std::function<std::string(Check&)>;

std::string str(double v) { return format_number(v); }

std::string joined(const std::vector<std::string>& words) {
  std::string out;
  for (const auto& w : words) out += (out.empty() ? "" : " ") + w;
  return out;
}

int shell(const std::string& cmd, std::string* out = nullptr) {
  FILE* p = ::popen((cmd + " 2>/dev/null").c_str(), "r");
  if (!p) return -1;
  char buf[4096];
  std::size_t n;
  std::string text;
  while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) text.append(buf, n);
  const int raw = ::pclose(p);
  if (out) *out = text;
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

std::string q(const fs::path& p) { return "'" + p.string() + "'"; }

UtteranceRecord utt(const std::string& id, const std::string& ref) {
  return {id, std::nullopt, 1.0, ref, "s", Gender::unknown, "d", Split::test};
}

std::string words(std::size_t n, const std::string& stem) {
  std::string out;
  for (std::size_t i = 0; i < n; ++i) out += (i ? " " : "") + stem + std::string(1, char('a' + i % 26)) + std::string(1, char('a' + i / 26));
  return out;
}

// -- criteria -------------------------------------------------------------------

std::string wer_oracle(Check& c) {
  const auto seqs = oracle::all_sequences(3, 5);
  std::vector<AlignmentResult> got;
  got.reserve(seqs.size() * seqs.size());
  const auto t0 = std::chrono::steady_clock::now();
  for (const auto& r : seqs) {
    for (const auto& h : seqs) got.push_back(align(r, h));
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::size_t k = 0;
  for (const auto& r : seqs) {
    for (const auto& h : seqs) {
      const auto want = oracle::best_script(r, h);
      const auto& g = got[k++];
      if (g.errors() != static_cast<std::uint64_t>(want.cost) || g.substitutions != static_cast<std::uint64_t>(want.subs) ||
          g.insertions != static_cast<std::uint64_t>(want.ins) || g.deletions != static_cast<std::uint64_t>(want.dels)) {
        c.fail("mismatch at pair " + std::to_string(k - 1));
      }
    }
  }
  c.expect(secs < 60.0, "alignment took " + str(secs) + " s");
  return std::to_string(k) + " pairs over " + std::to_string(seqs.size()) + " sequences, align " + str(secs) + " s";
}

std::string normalization(Check& c) {
  oracle::FuzzText fuzz(20240601);
  const auto basic = NormalizationProfile::basic();
  const auto whisper = NormalizationProfile::whisper();
  for (int k = 0; k < 10000; ++k) {
    const std::string t = fuzz.next();
    const std::string b = normalize(t, basic).text;
    const std::string w = normalize(t, whisper).text;
    c.expect(normalize(b, basic).text == b, "basic not idempotent on fuzz case " + std::to_string(k));
    c.expect(normalize(w, whisper).text == w, "whisper not idempotent on fuzz case " + std::to_string(k));
    c.expect(normalize(b, whisper).text == b, "whisper changes basic output on fuzz case " + std::to_string(k));
  }
  std::size_t numbered = 0;
  for (const auto& k : oracle::kFrenchCorpus) {
    const std::string got = normalize_basic(k.input);
    c.expect(got == k.expected, std::string("corpus '") + k.input + "' gave '" + got + "'");
    std::string expect_words;
    switch (k.kind) {
      case oracle::Num::none: continue;
      case oracle::Num::cardinal: expect_words = oracle::cardinal(k.number); break;
      case oracle::Num::ordinal: expect_words = oracle::ordinal(k.number); break;
      case oracle::Num::ordinal_fem: expect_words = oracle::ordinal(k.number, true); break;
    }
    ++numbered;
    c.expect(std::string(k.expected).find(expect_words) != std::string::npos,
             std::string("oracle words missing for '") + k.input + "'");
  }
  c.expect(normalize_basic("l'école") == "l' école", "l'école");
  c.expect(normalize_basic("10km") == "dix km", "10km");
  return "10000 fuzz strings, " + std::to_string(oracle::kFrenchCorpus.size()) + " corpus cases (" +
         std::to_string(numbered) + " with numbers)";
}

std::string numbers(Check& c) {
  auto check = [&](std::uint32_t n) {
    c.expect(joined(verbalize_number_fr(n, NumberKind::cardinal)) == oracle::cardinal(n),
             "cardinal " + std::to_string(n));
    if (n == 0) return;
    c.expect(joined(verbalize_number_fr(n, NumberKind::ordinal)) == oracle::ordinal(n), "ordinal " + std::to_string(n));
    c.expect(joined(verbalize_number_fr(n, NumberKind::ordinal, GrammaticalGender::feminine)) ==
                 oracle::ordinal(n, true),
             "feminine ordinal " + std::to_string(n));
  };
  for (std::uint32_t n = 0; n <= 10000; ++n) check(n);
  std::mt19937_64 rng(1000);
  std::uniform_int_distribution<std::uint32_t> pick(10000, 999999);
  for (int k = 0; k < 1000; ++k) check(pick(rng));
  return "0-10000 exhaustive and 1000 samples in 10000-999999";
}

std::string rtf_arithmetic(Check& c) {
  const Manifest m({{"a", std::nullopt, 1.0, "x", "s", Gender::unknown, "d", Split::test},
                    {"b", std::nullopt, 4.0, "x", "s", Gender::unknown, "d", Split::test}});
  const auto one = rtf({{"a", 0.25, {"inference"}, {}}}, m);
  const auto four = rtf({{"b", 1.0, {"inference"}, {}}}, m);
  c.expect(one && *one == 25.0, "0.25 s over 1 s gave " + (one ? str(*one) : "nan"));
  c.expect(four && *four == 25.0, "1 s over 4 s gave " + (four ? str(*four) : "nan"));
  return "0.25 s / 1 s = " + (one ? str(*one) : "nan") + "%, 1 s / 4 s = " + (four ? str(*four) : "nan") + "%";
}

std::string dir_and_skip(Check& c) {
  const auto basic = NormalizationProfile::basic();
  // 41 deletions in one utterance, 20 insertions in another.
  const Manifest m({utt("del", words(41, "d")), utt("ins", "oui non")});
  const std::vector<Hypothesis> h = {{"del", ""}, {"ins", "oui non " + words(20, "i")}};
  const Evaluation ev = evaluate(m, h, {}, basic, {"dir-fixture", "", nullptr});
  const AggregateMetrics& a = ev.report.overall().metrics;
  c.expect(a.words.deletions == 41 && a.words.insertions == 20, "fixture counts are off");
  c.expect(a.dir && *a.dir == 41.0 / 20.0, "DIR " + (a.dir ? str(*a.dir) : "undefined"));
  const std::string csv = render_report({ev.report}, ReportFormat::csv);
  const std::string md = render_report({ev.report}, ReportFormat::markdown);
  c.expect(csv.find(",2.05,") != std::string::npos, "csv does not render 2.05");
  c.expect(md.find("| 2.05 |") != std::string::npos, "markdown does not render 2.05");
  const double n = static_cast<double>(a.words.n_ref);
  const double replaced = 100.0 * static_cast<double>(a.words.substitutions + 2 * a.words.insertions) / n;
  c.expect(a.skip_corrected_wer_pct && *a.skip_corrected_wer_pct == replaced, "skip-corrected WER on DIR fixture");

  // High deletion: 200 reference words; 60 dropped, 5 substituted away from
  // the gaps and 3 appended after the last word.
  std::vector<std::string> ref_words, hyp_words;
  for (int i = 0; i < 200; ++i) {
    const std::string w = "w" + std::string(1, char('a' + i % 26)) + std::string(1, char('a' + i / 26));
    ref_words.push_back(w);
    if (i % 10 < 3) continue;
    hyp_words.push_back(i % 40 == 6 ? "zz" + w : w);
  }
  for (int k = 0; k < 3; ++k) hyp_words.push_back("extra");
  const Manifest hm({utt("h", joined(ref_words))});
  const Evaluation hv = evaluate(hm, {{"h", joined(hyp_words)}}, {}, basic, {"high-del", "", nullptr});
  const AggregateMetrics& b = hv.report.overall().metrics;
  const double skip = 100.0 * static_cast<double>(b.words.substitutions + 2 * b.words.insertions) /
                      static_cast<double>(b.words.n_ref);
  c.expect(b.words.deletions == 60 && b.words.insertions == 3 && b.words.substitutions == 5,
           "high-deletion counts S=" + std::to_string(b.words.substitutions) + " I=" +
               std::to_string(b.words.insertions) + " D=" + std::to_string(b.words.deletions));
  c.expect(b.skip_corrected_wer_pct && *b.skip_corrected_wer_pct == skip, "skip-corrected WER on high-deletion fixture");
  c.expect(*b.skip_corrected_wer_pct <= *b.wer_pct, "skip-corrected WER above WER");

  // No insertions at all.
  const Manifest zm({utt("z", "un deux trois")});
  const Evaluation zv = evaluate(zm, {{"z", "un trois"}}, {}, basic, {"no-ins", "", nullptr});
  c.expect(!zv.report.overall().metrics.dir, "DIR defined without insertions");
  c.expect(render_report({zv.report}, ReportFormat::markdown).find(std::string("| ") + kUndefinedDir + " |") != std::string::npos,
           "undefined DIR not rendered as a dash");
  return "DIR " + (a.dir ? str(*a.dir) : "undefined") + "; high-deletion WER " + str(*b.wer_pct) +
         " -> skip-corrected " + str(*b.skip_corrected_wer_pct);
}

const std::vector<std::pair<std::string, double>> kPromptTable = {
    {"À partir de l'audio ci-joint, générez en français une transcription textuelle complète du contenu parlé.", 15.3},
    {"Transcrire le clip audio en texte français.", 16.1},
    {"À partir de l'audio ci-joint, générer en français une transcription textuelle complète du contenu parlé.", 16.5},
    {"Faire une transcription textuelle complète en français du contenu parlé du clip audio.", 17.4},
    {"Transcribe the french audio clip into text. Transcribe only what is present in the audio clip. Always "
     "transcribe in French.  Result:",
     18.1},
    {"Transcrire tout le clip audio en texte français. Ne pas ajouter de texte supplémentaire.", 18.5},
    {"Transcribe the audio clip into text.", 19.1},
    {"Transcribe the french audio clip into text. Always transcribe the audio clip in French. Do not add any other "
     "text. Do not use any other language. Result:",
     24.0},
    {"Transcribe the french audio clip into French text. Transcribe all and nothing but what is present in the audio "
     "clip. Result:",
     25.1},
};

std::string prompt_sweep_table(Check& c) {
  // 1000 words, so a WER of x% is 10x substitutions.
  const Manifest dev = testing::letter_manifest(10, 100);
  std::map<std::string, testing::PromptBehaviour> table;
  for (const auto& [prompt, wer] : kPromptTable) table[prompt] = {static_cast<std::size_t>(std::lround(wer * 10))};
  const auto factory = testing::sweep_factory(table);

  std::vector<std::string> in_order;
  for (const auto& row : kPromptTable) in_order.push_back(row.first);
  const SweepReport direct = prompt_sweep(testing::sweep_spec(), in_order, dev, NormalizationProfile::basic(), factory);
  std::string expected_md = "| # | Prompt | %WER |\n| ---: | --- | ---: |\n";
  for (std::size_t i = 0; i < kPromptTable.size(); ++i) {
    char wer[16];
    std::snprintf(wer, sizeof wer, "%.1f", kPromptTable[i].second);
    expected_md += "| " + std::to_string(i + 1) + " | " + kPromptTable[i].first + (i == 0 ? " (selected)" : "") +
                   " | " + wer + " |\n";
  }
  c.expect(render_sweep(direct, ReportFormat::markdown) == expected_md, "rendered table differs from the reference");

  std::mt19937 rng(77);
  for (int round = 0; round < 5; ++round) {
    std::vector<std::string> shuffled = in_order;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const SweepReport r = prompt_sweep(testing::sweep_spec(), shuffled, dev, NormalizationProfile::basic(), factory);
    for (std::size_t i = 0; i < kPromptTable.size(); ++i) {
      c.expect(r.ranked[i].prompt == kPromptTable[i].first, "rank " + std::to_string(i + 1) + " has the wrong prompt");
      c.expect(r.ranked[i].wer_pct && std::abs(*r.ranked[i].wer_pct - kPromptTable[i].second) < 1e-9,
               "rank " + std::to_string(i + 1) + " WER");
    }
    c.expect(r.best().prompt == kPromptTable[0].first, "wrong selected prompt");
  }
  return "selected prompt at " + format_number(direct.best().wer_pct) + "% WER, 9 prompts, 5 shuffled orders";
}

std::string semantic(Check& c) {
  EmbeddingRows<double> ref(2, 3), hyp(1, 3);
  ref << 1, 0, 0, 0, 1, 0;
  hyp << 1, 0, 0;
  const SemanticScore s = greedy_match_score(ref, hyp);
  c.expect(std::abs(s.recall - 0.5) < 1e-9 && std::abs(s.precision - 1.0) < 1e-9, "orthonormal P/R");
  c.expect(std::abs(s.f1_scaled - 200.0 / 3.0) < 1e-9, "orthonormal F1 " + str(s.f1_scaled));

  DeterministicProvider provider(4242);
  std::mt19937 rng(99);
  std::uniform_int_distribution<int> len(1, 16);
  std::uniform_real_distribution<double> scale(1e-3, 1e3);
  for (int k = 0; k < 1000; ++k) {
    EmbeddingRequest a{"a", {}}, b{"b", {}};
    for (int i = len(rng); i > 0; --i) a.tokens.push_back("t" + std::to_string(rng() % 30));
    for (int i = len(rng); i > 0; --i) b.tokens.push_back("t" + std::to_string(rng() % 30));
    const EmbeddingRows<double> ra = provider.embed(a).vectors.cast<double>();
    const EmbeddingRows<double> rb = provider.embed(b).vectors.cast<double>();
    const double base = greedy_match_score(ra, rb).f1_scaled;

    EmbeddingRows<double> scaled = rb;
    for (Eigen::Index i = 0; i < scaled.rows(); ++i) scaled.row(i) *= scale(rng);
    c.expect(std::abs(greedy_match_score(ra, scaled).f1_scaled - base) < 1e-9, "scale invariance, case " + std::to_string(k));

    std::vector<Eigen::Index> perm(static_cast<std::size_t>(ra.rows()));
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    EmbeddingRows<double> permuted(ra.rows(), ra.cols());
    for (Eigen::Index i = 0; i < ra.rows(); ++i) permuted.row(i) = ra.row(perm[static_cast<std::size_t>(i)]);
    c.expect(std::abs(greedy_match_score(permuted, rb).f1_scaled - base) < 1e-9,
             "permutation invariance, case " + std::to_string(k));
  }

  std::vector<SemanticScore> pair(2);
  pair[0].f1_scaled = 100.0;
  pair[1].f1_scaled = 80.0;
  const auto corpus = score_run(pair, std::vector<double>{10.0, 30.0});
  c.expect(corpus && *corpus == 85.0, "weighted mean " + (corpus ? str(*corpus) : "undefined"));
  return "F1 " + str(s.f1_scaled) + ", 1000 random pairs, corpus " + (corpus ? str(*corpus) : "undefined");
}

std::string end_to_end(Check& c) {
  testing::TempDir tmp;
  const fs::path fx = testing::fixture("synth20");
  const std::string base = std::string(ASREVAL_CLI) + " run --manifest " + q(fx / "manifest.jsonl") +
                           " --transcriber " + q(fx / "transcriber.json") + " --strata gender,dataset+split --semantic --out ";
  c.expect(shell(base + q(tmp / "a")) == 0, "first run failed");
  c.expect(shell(base + q(tmp / "b")) == 0, "second run failed");
  std::size_t compared = 0;
  for (const auto& entry : fs::directory_iterator(tmp / "a")) {
    const std::string name = entry.path().filename().string();
    if (name == "run_meta.json") continue;
    ++compared;
    c.expect(testing::read_text(entry.path()) == testing::read_text(tmp / "b" / name), name + " differs between runs");
  }
  c.expect(compared >= 7, "only " + std::to_string(compared) + " artifacts written");
  std::string out;
  c.expect(shell(std::string(ASREVAL_CLI) + " verify " + q(tmp / "a"), &out) == 0, "verify failed");
  c.expect(out == "20 utterances checked, 0 discrepancies\n", "verify said: " + out);
  if (!out.empty() && out.back() == '\n') out.pop_back();
  return std::to_string(compared) + " artifacts identical; " + out;
}

std::string impact(Check& c) {
  const fs::path fx = testing::fixture("divergence");
  const Manifest m = load_manifest(fx / "manifest.jsonl");
  const auto hyps = load_hypotheses(fx / "hyps.jsonl", m);
  DeterministicProvider provider;
  const auto rows = normalization_impact(m, hyps, &provider);
  c.expect(rows.size() == 2, "expected two rows");
  if (rows.size() != 2) return "";
  c.expect(rows[0].profile == "basic" && rows[1].profile == "whisper", "row order");
  c.expect(rows[0].wer_pct && rows[1].wer_pct && *rows[0].wer_pct < *rows[1].wer_pct, "basic WER not below whisper");
  c.expect(rows[0].bert_f1 && rows[1].bert_f1, "Bert F1 missing");
  const std::string md = render_impact(rows, ReportFormat::markdown);
  c.expect(md.rfind("| Normalization | %WER | BERT F1 |", 0) == 0, "table header");
  return "basic " + format_number(rows[0].wer_pct) + " vs whisper " + format_number(rows[1].wer_pct) + " %WER";
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, Criterion>> criteria = {
      {"wer-oracle", wer_oracle},
      {"normalization-suite", normalization},
      {"number-verbalization", numbers},
      {"rtf-arithmetic", rtf_arithmetic},
      {"dir-skip-correction", dir_and_skip},
      {"prompt-sweep", prompt_sweep_table},
      {"semantic-scorer", semantic},
      {"end-to-end-determinism", end_to_end},
      {"normalization-impact", impact},
  };
  int only = 0;
  if (argc == 3 && std::string(argv[1]) == "--only") only = std::atoi(argv[2]);

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only && static_cast<int>(i + 1) != only) continue;
    Check c;
    std::string detail;
    try {
      detail = criteria[i].second(c);
    } catch (const std::exception& e) {
      c.fail(std::string("exception: ") + e.what());
    }
    const bool ok = c.failure.empty();
    failed += ok ? 0 : 1;
    std::cout << (ok ? "PASS " : "FAIL ") << i + 1 << ' ' << criteria[i].first << ": "
              << (ok ? detail : c.failure) << std::endl;
  }
  return failed ? 1 : 0;
}
