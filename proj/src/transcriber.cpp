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

#include "asreval/transcriber.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <regex>
#include <sstream>
#include <unordered_map>

#include "asreval/process.hpp"
#include "httplib.h"
#include "json.hpp"

namespace asreval {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

std::string_view to_string(TranscriberKind k) {
  switch (k) {
    case TranscriberKind::replay: return "replay";
    case TranscriberKind::subprocess: return "subprocess";
    case TranscriberKind::http: return "http";
  }
  return "?";
}

std::optional<TranscriberKind> parse_transcriber_kind(std::string_view s) {
  if (s == "replay") return TranscriberKind::replay;
  if (s == "subprocess") return TranscriberKind::subprocess;
  if (s == "http") return TranscriberKind::http;
  return std::nullopt;
}

namespace {

const std::regex& url_pattern() {
  static const std::regex re(R"(^(https?://[^/?#]+)([/?].*)?$)");
  return re;
}

}  // namespace

void TranscriberSpec::validate() const {
  if (id.empty()) throw SpecError("transcriber spec needs an id");
  if (target.empty()) throw SpecError("transcriber '" + id + "' needs a target");
  if (!(timeout_s > 0.0)) throw SpecError("transcriber '" + id + "': timeout_s must be positive");
  switch (kind) {
    case TranscriberKind::replay:
      if (prompt) throw SpecError("transcriber '" + id + "': replay specs cannot take a prompt");
      break;
    case TranscriberKind::subprocess:
      if (target.find("{audio}") == std::string::npos) {
        throw SpecError("transcriber '" + id + "': command template lacks {audio}");
      }
      break;
    case TranscriberKind::http:
      if (!std::regex_match(target, url_pattern())) {
        throw SpecError("transcriber '" + id + "': target is not an http(s) URL");
      }
      break;
  }
}

TranscriberSpec parse_transcriber_spec(std::string_view json_text, const fs::path& base_dir) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw SpecError(std::string("malformed transcriber spec: ") + e.what());
  }
  if (!j.is_object()) throw SpecError("transcriber spec must be a JSON object");
  TranscriberSpec s;
  try {
    s.id = j.at("id").get<std::string>();
    const auto kind = parse_transcriber_kind(j.at("kind").get<std::string>());
    if (!kind) throw SpecError("unknown transcriber kind '" + j.at("kind").get<std::string>() + "'");
    s.kind = *kind;
    s.target = j.at("target").get<std::string>();
    if (j.contains("prompt") && !j["prompt"].is_null()) s.prompt = j["prompt"].get<std::string>();
    if (j.contains("prompt_id") && !j["prompt_id"].is_null()) s.prompt_id = j["prompt_id"].get<std::string>();
    if (j.contains("language_hint") && !j["language_hint"].is_null()) {
      s.language_hint = j["language_hint"].get<std::string>();
    }
    s.timeout_s = j.value("timeout_s", s.timeout_s);
    if (j.contains("headers")) s.headers = j["headers"].get<std::map<std::string, std::string>>();
    s.response_pointer = j.value("response_pointer", "");
  } catch (const json::exception& e) {
    throw SpecError(std::string("transcriber spec: ") + e.what());
  }
  if (s.kind == TranscriberKind::replay && !base_dir.empty() && fs::path(s.target).is_relative()) {
    s.target = (base_dir / s.target).lexically_normal().string();
  }
  s.validate();
  return s;
}

TranscriberSpec load_transcriber_spec(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open transcriber spec " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_transcriber_spec(buf.str(), path.parent_path());
}

void write_timings(std::ostream& out, const std::vector<TimingRecord>& timings) {
  for (const auto& t : timings) {
    json j;
    j["utterance_id"] = t.utterance_id;
    j["wall_time_s"] = t.wall_time_s;
    j["included_phases"] = t.included_phases;
    j["excluded_phases"] = t.excluded_phases;
    out << j.dump() << '\n';
  }
}

std::vector<TimingRecord> parse_timings(std::istream& in, const std::string& source_name) {
  std::vector<TimingRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const json j = json::parse(line);
      TimingRecord t;
      t.utterance_id = j.at("utterance_id").get<std::string>();
      t.wall_time_s = j.at("wall_time_s").get<double>();
      t.included_phases = j.value("included_phases", std::vector<std::string>{});
      t.excluded_phases = j.value("excluded_phases", std::vector<std::string>{});
      if (t.wall_time_s < 0.0) throw LoadError(source_name, lineno, "negative wall_time_s");
      out.push_back(std::move(t));
    } catch (const json::exception& e) {
      throw LoadError(source_name, lineno, e.what());
    }
  }
  return out;
}

Transcriber::Transcriber(TranscriberSpec spec) : spec_(std::move(spec)) { spec_.validate(); }

Hypothesis Transcriber::make_hypothesis(const UtteranceRecord& utterance, std::string text) const {
  Hypothesis h;
  h.utterance_id = utterance.id;
  h.text = std::move(text);
  h.prompt_id = spec_.prompt_id;
  return h;
}

Transcription Transcriber::transcribe(const UtteranceRecord& utterance) {
  std::lock_guard<std::mutex> lock(serial_);
  try {
    Transcription t = do_transcribe(utterance);
    if (t.hypothesis.failed) {
      t.hypothesis.text.clear();
      t.hypothesis.wall_time_s.reset();
      t.timing.reset();
    }
    return t;
  } catch (const std::exception& e) {
    Transcription t;
    t.hypothesis = make_hypothesis(utterance, "");
    t.hypothesis.failed = true;
    t.error = e.what();
    return t;
  }
}

namespace {

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

Transcription failure(Hypothesis h, std::string error) {
  h.text.clear();
  h.failed = true;
  return Transcription{std::move(h), std::nullopt, std::move(error)};
}

const std::string& audio_of(const UtteranceRecord& u) {
  if (!u.audio_path || u.audio_path->empty()) throw std::runtime_error("utterance has no audio_path");
  std::ifstream probe(*u.audio_path, std::ios::binary);
  if (!probe) throw std::runtime_error("audio not readable: " + *u.audio_path);
  return *u.audio_path;
}

class ReplayTranscriber final : public Transcriber {
 public:
  ReplayTranscriber(const TranscriberSpec& spec, const Manifest& manifest) : Transcriber(spec) {
    for (auto& h : load_hypotheses(spec.target, manifest)) {
      if (h.prompt_id == spec.prompt_id) by_id_.emplace(h.utterance_id, std::move(h));
    }
  }

 protected:
  Transcription do_transcribe(const UtteranceRecord& u) override {
    auto it = by_id_.find(u.id);
    if (it == by_id_.end()) return failure(make_hypothesis(u, ""), "no replayed hypothesis");
    Transcription t{it->second, std::nullopt, {}};
    if (t.hypothesis.failed) return failure(t.hypothesis, "replayed hypothesis is marked failed");
    if (t.hypothesis.wall_time_s) {
      t.timing = TimingRecord{u.id, *t.hypothesis.wall_time_s, {"inference"}, {}};
    }
    return t;
  }

 private:
  std::unordered_map<std::string, Hypothesis> by_id_;
};

class SubprocessTranscriber final : public Transcriber {
 public:
  using Transcriber::Transcriber;

 protected:
  Transcription do_transcribe(const UtteranceRecord& u) override {
    const std::string cmd = expand_command(spec().target, audio_of(u), spec().language_hint.value_or(""),
                                           spec().prompt.value_or(""));
    const auto t0 = Clock::now();
    const CommandResult r = run_command(cmd, Seconds(spec().timeout_s));
    const double wall = std::chrono::duration<double>(Clock::now() - t0).count();
    Hypothesis h = make_hypothesis(u, "");
    if (r.timed_out) return failure(std::move(h), "timed out after " + std::to_string(spec().timeout_s) + " s");
    if (r.exit_code != 0) return failure(std::move(h), "command exited with status " + std::to_string(r.exit_code));
    h.text = trim(r.output);
    h.wall_time_s = wall;
    return Transcription{h, TimingRecord{u.id, wall, {"inference"}, {}}, {}};
  }
};

std::string expand_env(const std::string& s) {
  static const std::regex var(R"(\$\{([A-Za-z_][A-Za-z0-9_]*)\})");
  std::string out;
  auto begin = std::sregex_iterator(s.begin(), s.end(), var);
  std::size_t last = 0;
  for (auto it = begin; it != std::sregex_iterator(); ++it) {
    out.append(s, last, static_cast<std::size_t>(it->position()) - last);
    if (const char* v = std::getenv((*it)[1].str().c_str())) out += v;
    last = static_cast<std::size_t>(it->position() + it->length());
  }
  out.append(s, last, std::string::npos);
  return out;
}

std::string replace_all(std::string s, const std::string& from, const std::string& to) {
  for (std::size_t pos = 0; (pos = s.find(from, pos)) != std::string::npos; pos += to.size()) {
    s.replace(pos, from.size(), to);
  }
  return s;
}

class HttpTranscriber final : public Transcriber {
 public:
  explicit HttpTranscriber(const TranscriberSpec& spec) : Transcriber(spec) {
    std::smatch m;
    std::regex_match(spec.target, m, url_pattern());
    origin_ = m[1].str();
    path_ = m[2].matched ? m[2].str() : "/";
    path_ = replace_all(path_, "{lang}", httplib::detail::encode_query_param(spec.language_hint.value_or("")));
    path_ = replace_all(path_, "{prompt}", httplib::detail::encode_query_param(spec.prompt.value_or("")));
    for (const auto& [k, v] : spec.headers) headers_.emplace(k, expand_env(v));
  }

 protected:
  Transcription do_transcribe(const UtteranceRecord& u) override {
    std::string audio;
    {
      std::ifstream in(audio_of(u), std::ios::binary);
      std::ostringstream buf;
      buf << in.rdbuf();
      audio = buf.str();
    }

    httplib::Client client(origin_);
    const auto timeout = std::chrono::duration_cast<std::chrono::microseconds>(Seconds(spec().timeout_s));
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);

    // The clock starts once the last body byte is handed to the socket, so
    // audio upload is excluded and the result download is included.
    std::optional<Clock::time_point> sent;
    constexpr std::size_t kChunk = 64 * 1024;
    auto provider = [&](std::size_t offset, std::size_t length, httplib::DataSink& sink) {
      const std::size_t n = std::min(length, kChunk);
      if (!sink.write(audio.data() + offset, n)) return false;
      if (offset + n == audio.size()) sent = Clock::now();
      return true;
    };
    const auto start = Clock::now();
    auto res = client.Post(path_, headers_, audio.size(), provider, "application/octet-stream");
    const auto done = Clock::now();
    const double wall = std::chrono::duration<double>(done - sent.value_or(start)).count();

    Hypothesis h = make_hypothesis(u, "");
    if (!res) return failure(std::move(h), "http error: " + httplib::to_string(res.error()));
    if (res->status < 200 || res->status >= 300) {
      return failure(std::move(h), "http status " + std::to_string(res->status));
    }
    if (spec().response_pointer.empty()) {
      h.text = trim(res->body);
    } else {
      const json body = json::parse(res->body);
      const json& v = body.at(json::json_pointer(spec().response_pointer));
      if (!v.is_string()) return failure(std::move(h), "response field is not a string");
      h.text = trim(v.get<std::string>());
    }
    h.wall_time_s = wall;
    return Transcription{h, TimingRecord{u.id, wall, {"inference", "download_of_result"}, {"upload_of_audio"}}, {}};
  }

 private:
  std::string origin_;
  std::string path_;
  httplib::Headers headers_;
};

}  // namespace

std::string expand_command(const std::string& tmpl, const std::string& audio, const std::string& lang,
                           const std::string& prompt) {
  std::string out;
  for (std::size_t i = 0; i < tmpl.size();) {
    if (tmpl.compare(i, 7, "{audio}") == 0) {
      out += shell_quote(audio);
      i += 7;
    } else if (tmpl.compare(i, 6, "{lang}") == 0) {
      out += shell_quote(lang);
      i += 6;
    } else if (tmpl.compare(i, 8, "{prompt}") == 0) {
      out += shell_quote(prompt);
      i += 8;
    } else {
      out.push_back(tmpl[i++]);
    }
  }
  return out;
}

std::unique_ptr<Transcriber> make_transcriber(const TranscriberSpec& spec, const Manifest& manifest) {
  switch (spec.kind) {
    case TranscriberKind::replay: return std::make_unique<ReplayTranscriber>(spec, manifest);
    case TranscriberKind::subprocess: return std::make_unique<SubprocessTranscriber>(spec);
    case TranscriberKind::http: return std::make_unique<HttpTranscriber>(spec);
  }
  throw SpecError("unknown transcriber kind");
}

TranscriptionRun transcribe_all(Transcriber& transcriber, const Manifest& manifest) {
  TranscriptionRun run;
  const bool live = transcriber.spec().kind != TranscriberKind::replay;
  int streak = 0;
  for (const auto& u : manifest.records()) {
    Transcription t = transcriber.transcribe(u);
    if (t.hypothesis.failed) {
      ++run.failures;
      ++streak;
      run.errors.push_back(u.id + ": " + t.error);
    } else {
      streak = 0;
      if (t.timing) run.timings.push_back(std::move(*t.timing));
    }
    run.hypotheses.push_back(std::move(t.hypothesis));
    if (live && streak >= kMaxConsecutiveFailures) {
      run.aborted = true;
      break;
    }
  }
  return run;
}

std::optional<double> rtf(const std::vector<TimingRecord>& timings, const Manifest& manifest) {
  double wall = 0.0;
  double audio = 0.0;
  for (const auto& t : timings) {
    const UtteranceRecord* u = manifest.find(t.utterance_id);
    if (!u) throw std::invalid_argument("timing for unknown utterance '" + t.utterance_id + "'");
    wall += t.wall_time_s;
    audio += u->duration_s;
  }
  if (timings.empty() || !(audio > 0.0)) return std::nullopt;
  return 100.0 * wall / audio;
}

}  // namespace asreval
