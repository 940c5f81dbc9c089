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

#include "asreval/data_model.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>
#include <utility>

#include "json.hpp"

namespace asreval {

namespace {

using json = nlohmann::ordered_json;

constexpr std::string_view kMetaPrefix = "#meta ";

bool is_blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n\f\v");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n\f\v");
  return std::string(s.substr(b, e - b + 1));
}

const json& require(const json& obj, const char* key, const std::string& src, std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) {
    throw LoadError(src, line, std::string("missing field '") + key + "'");
  }
  return *it;
}

std::string require_string(const json& obj, const char* key, const std::string& src, std::size_t line) {
  const json& v = require(obj, key, src, line);
  if (!v.is_string()) throw LoadError(src, line, std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

std::optional<std::string> optional_string(const json& obj, const char* key, const std::string& src,
                                           std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw LoadError(src, line, std::string("field '") + key + "' must be a string");
  return it->get<std::string>();
}

json parse_line(const std::string& line, const std::string& src, std::size_t lineno) {
  json obj;
  try {
    obj = json::parse(line);
  } catch (const json::parse_error& e) {
    throw LoadError(src, lineno, std::string("malformed line: ") + e.what());
  }
  if (!obj.is_object()) throw LoadError(src, lineno, "malformed line: expected a JSON object");
  return obj;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError(path.string(), 0, "cannot open file");
  return in;
}

}  // namespace

std::string_view to_string(Gender g) {
  switch (g) {
    case Gender::male: return "male";
    case Gender::female: return "female";
    case Gender::unknown: return "unknown";
  }
  return "unknown";
}

std::string_view to_string(Split s) {
  switch (s) {
    case Split::train: return "train";
    case Split::dev: return "dev";
    case Split::test: return "test";
  }
  return "test";
}

std::optional<Gender> parse_gender(std::string_view s) {
  if (s == "male") return Gender::male;
  if (s == "female") return Gender::female;
  if (s == "unknown") return Gender::unknown;
  return std::nullopt;
}

std::optional<Split> parse_split(std::string_view s) {
  if (s == "train") return Split::train;
  if (s == "dev") return Split::dev;
  if (s == "test") return Split::test;
  return std::nullopt;
}

LoadError::LoadError(const std::string& path, std::size_t line, const std::string& what)
    : std::runtime_error(line > 0 ? path + ":" + std::to_string(line) + ": " + what : path + ": " + what),
      line_(line) {}

Manifest::Manifest(std::vector<UtteranceRecord> records, int format_version)
    : records_(std::move(records)), format_version_(format_version) {
  for (std::size_t i = 0; i < records_.size(); ++i) {
    if (!index_.emplace(records_[i].id, i).second) {
      throw std::invalid_argument("duplicate utterance id '" + records_[i].id + "'");
    }
  }
}

const UtteranceRecord* Manifest::find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  return it == index_.end() ? nullptr : &records_[it->second];
}

Manifest parse_manifest(std::istream& in, const std::string& src, ManifestOptions options) {
  std::vector<UtteranceRecord> records;
  std::unordered_map<std::string, std::size_t> seen;
  int version = kManifestFormatVersion;
  bool saw_meta = false;
  std::string line;
  std::size_t lineno = 0;

  while (std::getline(in, line)) {
    ++lineno;
    if (is_blank(line)) continue;
    if (line.rfind(kMetaPrefix, 0) == 0) {
      if (saw_meta || !records.empty()) throw LoadError(src, lineno, "#meta header must be the first line");
      json meta = parse_line(line.substr(kMetaPrefix.size()), src, lineno);
      auto it = meta.find("format_version");
      if (it == meta.end() || !it->is_number_integer()) {
        throw LoadError(src, lineno, "missing field 'format_version'");
      }
      version = it->get<int>();
      if (version != kManifestFormatVersion) {
        throw LoadError(src, lineno, "unsupported format_version " + std::to_string(version));
      }
      saw_meta = true;
      continue;
    }

    json obj = parse_line(line, src, lineno);
    UtteranceRecord r;
    r.id = require_string(obj, "id", src, lineno);
    if (r.id.empty()) throw LoadError(src, lineno, "empty id");
    r.audio_path = optional_string(obj, "audio_path", src, lineno);

    const json& dur = require(obj, "duration_s", src, lineno);
    if (!dur.is_number()) throw LoadError(src, lineno, "field 'duration_s' must be a number");
    r.duration_s = dur.get<double>();
    if (r.duration_s < 0.0 || (options.require_positive_duration && r.duration_s <= 0.0)) {
      throw LoadError(src, lineno, "non-positive duration for '" + r.id + "'");
    }

    r.reference = require_string(obj, "reference", src, lineno);
    if (trim(r.reference).empty()) throw LoadError(src, lineno, "empty reference for '" + r.id + "'");
    r.speaker_id = require_string(obj, "speaker_id", src, lineno);

    std::string g = require_string(obj, "gender", src, lineno);
    auto gender = parse_gender(g);
    if (!gender) throw LoadError(src, lineno, "invalid gender '" + g + "'");
    r.gender = *gender;

    r.dataset = require_string(obj, "dataset", src, lineno);

    std::string sp = require_string(obj, "split", src, lineno);
    auto split = parse_split(sp);
    if (!split) throw LoadError(src, lineno, "invalid split '" + sp + "'");
    r.split = *split;

    auto [it, inserted] = seen.emplace(r.id, lineno);
    if (!inserted) {
      throw LoadError(src, lineno,
                      "duplicate id '" + r.id + "' (first seen on line " + std::to_string(it->second) + ")");
    }
    records.push_back(std::move(r));
  }
  return Manifest(std::move(records), version);
}

Manifest load_manifest(const std::filesystem::path& path, ManifestOptions options) {
  auto in = open_input(path);
  return parse_manifest(in, path.string(), options);
}

void write_manifest(std::ostream& out, const Manifest& manifest) {
  out << kMetaPrefix << json{{"format_version", manifest.format_version()}}.dump() << '\n';
  for (const auto& r : manifest.records()) {
    json obj;
    obj["id"] = r.id;
    if (r.audio_path) obj["audio_path"] = *r.audio_path;
    obj["duration_s"] = r.duration_s;
    obj["reference"] = r.reference;
    obj["speaker_id"] = r.speaker_id;
    obj["gender"] = to_string(r.gender);
    obj["dataset"] = r.dataset;
    obj["split"] = to_string(r.split);
    out << obj.dump() << '\n';
  }
}

void write_manifest(const std::filesystem::path& path, const Manifest& manifest) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_manifest(out, manifest);
}

std::vector<Hypothesis> parse_hypotheses(std::istream& in, const std::string& src, const Manifest& manifest) {
  std::vector<Hypothesis> hyps;
  std::set<std::pair<std::string, std::string>> keys;
  std::vector<std::string> orphans;
  std::string line;
  std::size_t lineno = 0;

  while (std::getline(in, line)) {
    ++lineno;
    if (is_blank(line)) continue;
    json obj = parse_line(line, src, lineno);
    Hypothesis h;
    h.utterance_id = require_string(obj, "utterance_id", src, lineno);
    h.text = require_string(obj, "text", src, lineno);
    if (auto it = obj.find("wall_time_s"); it != obj.end() && !it->is_null()) {
      if (!it->is_number() || it->get<double>() < 0.0) {
        throw LoadError(src, lineno, "field 'wall_time_s' must be a non-negative number");
      }
      h.wall_time_s = it->get<double>();
    }
    h.prompt_id = optional_string(obj, "prompt_id", src, lineno);
    if (auto it = obj.find("failed"); it != obj.end() && it->is_boolean()) h.failed = it->get<bool>();

    if (!manifest.find(h.utterance_id)) {
      orphans.push_back(h.utterance_id);
      continue;
    }
    // A missing prompt_id and an empty prompt_id are distinct keys.
    std::string prompt_key = h.prompt_id ? "=" + *h.prompt_id : "";
    if (!keys.emplace(h.utterance_id, prompt_key).second) {
      throw LoadError(src, lineno,
                      "duplicate hypothesis for '" + h.utterance_id + "'" +
                          (h.prompt_id ? " with prompt_id '" + *h.prompt_id + "'" : ""));
    }
    hyps.push_back(std::move(h));
  }

  if (!orphans.empty()) {
    std::ostringstream msg;
    msg << "hypotheses reference unknown utterance ids:";
    for (const auto& id : orphans) msg << ' ' << id;
    throw LoadError(src, 0, msg.str());
  }
  return hyps;
}

std::vector<Hypothesis> load_hypotheses(const std::filesystem::path& path, const Manifest& manifest) {
  auto in = open_input(path);
  return parse_hypotheses(in, path.string(), manifest);
}

void write_hypotheses(std::ostream& out, const std::vector<Hypothesis>& hyps) {
  for (const auto& h : hyps) {
    json obj;
    obj["utterance_id"] = h.utterance_id;
    obj["text"] = h.text;
    if (h.wall_time_s) obj["wall_time_s"] = *h.wall_time_s;
    if (h.prompt_id) obj["prompt_id"] = *h.prompt_id;
    if (h.failed) obj["failed"] = true;
    out << obj.dump() << '\n';
  }
}

std::vector<std::string> missing_coverage(const Manifest& manifest, const std::vector<Hypothesis>& hyps) {
  std::unordered_set<std::string> covered;
  for (const auto& h : hyps) {
    if (!h.failed) covered.insert(h.utterance_id);
  }
  std::vector<std::string> missing;
  for (const auto& r : manifest.records()) {
    if (!covered.contains(r.id)) missing.push_back(r.id);
  }
  return missing;
}

}  // namespace asreval
