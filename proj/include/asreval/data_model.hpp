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

// Manifest and hypothesis records, plus their line-delimited JSON formats.
//
// Manifest file:
//   #meta {"format_version":1}
//   {"id":"u1","audio_path":"a/u1.wav","duration_s":3.2,"reference":"...",
//    "speaker_id":"s1","gender":"female","dataset":"Bast","split":"dev"}
//
// Hypothesis file:
//   {"utterance_id":"u1","text":"...","wall_time_s":0.4,"prompt_id":"p1"}

#ifndef ASREVAL_DATA_MODEL_HPP_
#define ASREVAL_DATA_MODEL_HPP_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace asreval {

inline constexpr int kManifestFormatVersion = 1;

enum class Gender { male, female, unknown };
enum class Split { train, dev, test };

std::string_view to_string(Gender g);
std::string_view to_string(Split s);
std::optional<Gender> parse_gender(std::string_view s);
std::optional<Split> parse_split(std::string_view s);

struct UtteranceRecord {
  std::string id;
  std::optional<std::string> audio_path;
  double duration_s = 0.0;
  std::string reference;
  std::string speaker_id;
  Gender gender = Gender::unknown;
  std::string dataset;
  Split split = Split::test;
};

struct Hypothesis {
  std::string utterance_id;
  std::string text;
  std::optional<double> wall_time_s;
  std::optional<std::string> prompt_id;
  // Set by transcriber adapters when the backend timed out or errored.
  bool failed = false;
};

class Manifest {
 public:
  Manifest() = default;
  Manifest(std::vector<UtteranceRecord> records, int format_version = kManifestFormatVersion);

  const std::vector<UtteranceRecord>& records() const { return records_; }
  int format_version() const { return format_version_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }

  const UtteranceRecord* find(std::string_view id) const;

 private:
  std::vector<UtteranceRecord> records_;
  std::unordered_map<std::string, std::size_t> index_;
  int format_version_ = kManifestFormatVersion;
};

// Reports the 1-based line of the first violation. line() is 0 for errors
// that are not tied to a single line (e.g. orphan hypotheses).
class LoadError : public std::runtime_error {
 public:
  LoadError(const std::string& path, std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct ManifestOptions {
  // Rejects duration_s == 0; negative durations are always rejected.
  bool require_positive_duration = false;
};

Manifest load_manifest(const std::filesystem::path& path, ManifestOptions options = {});
Manifest parse_manifest(std::istream& in, const std::string& source_name, ManifestOptions options = {});
void write_manifest(std::ostream& out, const Manifest& manifest);
void write_manifest(const std::filesystem::path& path, const Manifest& manifest);

// Every returned hypothesis resolves to a manifest record. Orphans and
// duplicate (utterance_id, prompt_id) keys raise LoadError.
std::vector<Hypothesis> load_hypotheses(const std::filesystem::path& path, const Manifest& manifest);
std::vector<Hypothesis> parse_hypotheses(std::istream& in, const std::string& source_name,
                                         const Manifest& manifest);
void write_hypotheses(std::ostream& out, const std::vector<Hypothesis>& hyps);

// Manifest ids (in manifest order) that have no successful hypothesis.
std::vector<std::string> missing_coverage(const Manifest& manifest, const std::vector<Hypothesis>& hyps);

}  // namespace asreval

#endif  // ASREVAL_DATA_MODEL_HPP_
