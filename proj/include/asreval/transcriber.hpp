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

// Transcription backends: replayed hypothesis files, local commands and
// HTTP endpoints. Every backend processes one utterance at a time.
//
// Spec file (JSON):
//   {"id": "whisper-turbo", "kind": "subprocess",
//    "target": "transcribe --lang {lang} --prompt {prompt} {audio}",
//    "prompt": "...", "prompt_id": "p1", "language_hint": "fr-CA",
//    "timeout_s": 300}
//
// http specs may add "headers" (values expand ${ENV_VAR}) and
// "response_pointer" (JSON pointer to the transcript in the reply; the
// raw body is the transcript when absent). The URL may use {lang} and
// {prompt}, which are percent-encoded.

#ifndef ASREVAL_TRANSCRIBER_HPP_
#define ASREVAL_TRANSCRIBER_HPP_

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "asreval/data_model.hpp"

namespace asreval {

enum class TranscriberKind { replay, subprocess, http };

std::string_view to_string(TranscriberKind k);
std::optional<TranscriberKind> parse_transcriber_kind(std::string_view s);

class SpecError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct TranscriberSpec {
  std::string id;
  TranscriberKind kind = TranscriberKind::replay;
  std::string target;
  std::optional<std::string> prompt;
  std::optional<std::string> prompt_id;
  std::optional<std::string> language_hint;
  double timeout_s = 300.0;
  std::map<std::string, std::string> headers;
  std::string response_pointer;

  bool prompt_capable() const { return kind != TranscriberKind::replay; }

  // Throws SpecError.
  void validate() const;
};

// Relative replay targets resolve against the spec file's directory.
TranscriberSpec load_transcriber_spec(const std::filesystem::path& path);
TranscriberSpec parse_transcriber_spec(std::string_view json_text, const std::filesystem::path& base_dir = {});

struct TimingRecord {
  std::string utterance_id;
  double wall_time_s = 0.0;
  std::vector<std::string> included_phases;
  std::vector<std::string> excluded_phases;
};

void write_timings(std::ostream& out, const std::vector<TimingRecord>& timings);
std::vector<TimingRecord> parse_timings(std::istream& in, const std::string& source_name);

struct Transcription {
  Hypothesis hypothesis;
  std::optional<TimingRecord> timing;  // absent on failure and for untimed replay
  std::string error;
};

class Transcriber {
 public:
  explicit Transcriber(TranscriberSpec spec);
  virtual ~Transcriber() = default;

  const TranscriberSpec& spec() const { return spec_; }

  // Serialized per instance. Never throws for backend failures: the result
  // carries failed = true, empty text and the error message.
  Transcription transcribe(const UtteranceRecord& utterance);

 protected:
  // May throw; any exception becomes a failed transcription.
  virtual Transcription do_transcribe(const UtteranceRecord& utterance) = 0;

  Hypothesis make_hypothesis(const UtteranceRecord& utterance, std::string text) const;

 private:
  TranscriberSpec spec_;
  std::mutex serial_;
};

// The replay backend needs the manifest to validate the hypothesis file.
std::unique_ptr<Transcriber> make_transcriber(const TranscriberSpec& spec, const Manifest& manifest);

// Expands {audio}, {lang} and {prompt} with shell-quoted values.
std::string expand_command(const std::string& tmpl, const std::string& audio, const std::string& lang,
                           const std::string& prompt);

inline constexpr int kMaxConsecutiveFailures = 3;

struct TranscriptionRun {
  std::vector<Hypothesis> hypotheses;
  std::vector<TimingRecord> timings;
  std::vector<std::string> errors;  // "utterance_id: message"
  std::size_t failures = 0;
  bool aborted = false;
};

// Transcribes the manifest in order. Live backends stop after
// kMaxConsecutiveFailures failures in a row; utterances after the abort
// get no hypothesis.
TranscriptionRun transcribe_all(Transcriber& transcriber, const Manifest& manifest);

// 100 * sum(wall time) / sum(duration). Timings exist only for successful
// utterances. nullopt when there are none or the total duration is zero.
std::optional<double> rtf(const std::vector<TimingRecord>& timings, const Manifest& manifest);

}  // namespace asreval

#endif  // ASREVAL_TRANSCRIBER_HPP_
