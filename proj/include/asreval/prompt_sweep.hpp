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

// Instruction-prompt selection for prompted transcribers: every prompt is
// evaluated on a development manifest and the lowest-WER one is kept.

#ifndef ASREVAL_PROMPT_SWEEP_HPP_
#define ASREVAL_PROMPT_SWEEP_HPP_

#include <optional>
#include <string>
#include <vector>

#include "asreval/pipeline.hpp"

namespace asreval {

struct PromptResult {
  std::size_t index = 0;  // 0-based position in the input list
  std::string prompt_id;  // "p1", "p2", ... unless given
  std::string prompt;
  std::optional<double> wer_pct;
  std::size_t failures = 0;
  bool aborted = false;
  bool excluded = false;  // every utterance failed
};

struct SweepReport {
  std::string model_id;
  std::string profile;
  std::vector<PromptResult> ranked;  // WER ascending, excluded prompts last
  std::size_t selected = 0;          // index into ranked
  std::vector<std::string> warnings;

  const PromptResult& best() const { return ranked.at(selected); }
};

class SweepError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Throws SweepError when fewer than two prompts are given, the spec cannot
// take a prompt, or every prompt fails.
SweepReport prompt_sweep(const TranscriberSpec& spec, const std::vector<std::string>& prompts,
                         const Manifest& dev_manifest, const NormalizationProfile& profile,
                         const TranscriberFactory& factory = {});

// One prompt per non-empty line.
std::vector<std::string> load_prompts(const std::filesystem::path& path);

std::string render_sweep(const SweepReport& report, ReportFormat format);

}  // namespace asreval

#endif  // ASREVAL_PROMPT_SWEEP_HPP_
