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

#include "asreval/embedding_provider.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "asreval/hashing.hpp"

namespace asreval {

namespace fs = std::filesystem;

ProviderError::ProviderError(const std::string& utterance_id, const std::string& what)
    : std::runtime_error("embedding provider failed on '" + utterance_id + "': " + what),
      utterance_id_(utterance_id) {}

EmbeddingMatrix<float> EmbeddingProvider::embed(const EmbeddingRequest& request) {
  ++calls_;
  return do_embed(request);
}

// -- deterministic -----------------------------------------------------------

DeterministicProvider::DeterministicProvider(std::uint64_t seed, int dim) : seed_(seed), dim_(dim) {
  if (dim_ <= 0) throw std::invalid_argument("embedding dimension must be positive");
}

std::string DeterministicProvider::id() const {
  return "deterministic/d" + std::to_string(dim_) + "/seed" + std::to_string(seed_);
}

Eigen::RowVectorXf DeterministicProvider::row(const std::string& token, std::size_t position) const {
  std::string key;
  put_u64_le(key, seed_);
  put_u64_le(key, position);
  key += token;
  const Sha256Digest digest = sha256(key);
  std::uint64_t state = 0;
  for (int i = 0; i < 8; ++i) state = (state << 8) | digest[static_cast<std::size_t>(i)];

  std::mt19937_64 gen(state);
  std::vector<double> v(static_cast<std::size_t>(dim_));
  double norm2 = 0.0;
  for (double& x : v) {
    const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
    x = 2.0 * u - 1.0;
    norm2 += x * x;
  }
  Eigen::RowVectorXf out(dim_);
  if (!(norm2 > 0.0)) {
    out.setZero();
    out(0) = 1.0f;
    return out;
  }
  const double norm = std::sqrt(norm2);
  for (int j = 0; j < dim_; ++j) out(j) = static_cast<float>(v[static_cast<std::size_t>(j)] / norm);
  return out;
}

EmbeddingMatrix<float> DeterministicProvider::do_embed(const EmbeddingRequest& request) {
  EmbeddingMatrix<float> m{request.id, request.tokens, EmbeddingRows<float>(request.tokens.size(), dim_)};
  for (std::size_t i = 0; i < request.tokens.size(); ++i) {
    m.vectors.row(static_cast<Eigen::Index>(i)) = row(request.tokens[i], i);
  }
  return m;
}

// -- subprocess --------------------------------------------------------------

SubprocessProvider::SubprocessProvider(std::string command, Seconds timeout)
    : command_(std::move(command)), timeout_(timeout) {}

SubprocessProvider::~SubprocessProvider() {
  if (child_ && child_->running()) {
    child_->close_stdin();
    try {
      child_->read_to_end(Seconds(2));
    } catch (const ProcessError&) {
    }
  }
}

std::string SubprocessProvider::id() const { return "subprocess:" + command_; }

void SubprocessProvider::ensure_started(const std::string& utterance_id) {
  if (child_ && child_->running()) return;
  try {
    child_ = std::make_unique<ChildProcess>(ChildProcess::spawn(command_));
  } catch (const ProcessError& e) {
    throw ProviderError(utterance_id, e.what());
  }
}

EmbeddingMatrix<float> SubprocessProvider::do_embed(const EmbeddingRequest& request) {
  ensure_started(request.id);
  ChildProcess& child = *child_;
  try {
    child.write_all(encode_request(request));
    auto read_line = [&](std::size_t max_bytes) { return child.read_line(timeout_, max_bytes); };
    auto read_exact = [&](std::size_t n) { return child.read_exact(n, timeout_); };
    EmbeddingMatrix<float> m = decode_payload(read_line, read_exact);
    if (m.utterance_id != request.id) {
      throw ProtocolError("reply for '" + m.utterance_id + "' does not match request '" + request.id + "'");
    }
    return m;
  } catch (const ProcessError& e) {
    child_.reset();
    throw ProviderError(request.id, e.what());
  } catch (const ProtocolError&) {
    // The stream position is unknown after a bad reply.
    child_.reset();
    throw;
  }
}

// -- replay and cache --------------------------------------------------------

std::string text_hash(std::span<const std::string> tokens) {
  std::string joined;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) joined.push_back('\x1f');
    joined += tokens[i];
  }
  return sha256_hex(joined);
}

std::string provider_dir_name(const std::string& provider_id) {
  std::string out;
  for (char c : provider_id) {
    const bool safe = std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.';
    out.push_back(safe ? c : '_');
  }
  if (out.size() > 80) out = out.substr(0, 63) + "_" + sha256_hex(provider_id).substr(0, 16);
  return out;
}

namespace {

std::optional<EmbeddingMatrix<float>> read_payload_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buf;
  buf << in.rdbuf();
  return decode_payload(std::string_view(buf.str()));
}

}  // namespace

ReplayProvider::ReplayProvider(fs::path dir, std::string provider_id)
    : dir_(std::move(dir)), provider_id_(std::move(provider_id)) {}

EmbeddingMatrix<float> ReplayProvider::do_embed(const EmbeddingRequest& request) {
  const fs::path path = dir_ / (text_hash(request.tokens) + ".emb");
  auto m = read_payload_file(path);
  if (!m) throw ProviderError(request.id, "no replay payload at " + path.string());
  m->utterance_id = request.id;
  return std::move(*m);
}

CachingProvider::CachingProvider(std::unique_ptr<EmbeddingProvider> inner, fs::path cache_dir)
    : inner_(std::move(inner)), cache_dir_(std::move(cache_dir)) {}

fs::path CachingProvider::entry_path(std::span<const std::string> tokens) const {
  return cache_dir_ / provider_dir_name(inner_->id()) / (text_hash(tokens) + ".emb");
}

EmbeddingMatrix<float> CachingProvider::do_embed(const EmbeddingRequest& request) {
  const fs::path path = entry_path(request.tokens);
  try {
    if (auto cached = read_payload_file(path); cached && cached->tokens == request.tokens) {
      ++hits_;
      cached->utterance_id = request.id;
      return std::move(*cached);
    }
  } catch (const ProtocolError&) {
    // Corrupt entry: fall through and overwrite it.
  }

  EmbeddingMatrix<float> m = inner_->embed(request);
  if (m.tokens == request.tokens) {
    fs::create_directories(path.parent_path());
    const fs::path tmp = path.string() + ".tmp";
    {
      std::ofstream out(tmp, std::ios::binary);
      const std::string payload = encode_payload(m);
      out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
    }
    fs::rename(tmp, path);
  }
  return m;
}

std::unique_ptr<EmbeddingProvider> make_provider(const std::string& spec, std::uint64_t seed) {
  if (spec == "deterministic") return std::make_unique<DeterministicProvider>(seed);
  if (spec.rfind("deterministic:", 0) == 0) {
    return std::make_unique<DeterministicProvider>(seed, std::stoi(spec.substr(14)));
  }
  if (spec.rfind("subprocess:", 0) == 0) return std::make_unique<SubprocessProvider>(spec.substr(11));
  if (spec.rfind("replay:", 0) == 0) {
    fs::path dir = spec.substr(7);
    return std::make_unique<ReplayProvider>(dir, "replay:" + dir.filename().string());
  }
  throw std::invalid_argument("unknown embedding provider '" + spec + "'");
}

std::vector<EmbeddingMatrix<float>> request_embeddings(std::span<const EmbeddingRequest> requests,
                                                       EmbeddingProvider& provider) {
  std::vector<EmbeddingMatrix<float>> out;
  out.reserve(requests.size());
  for (const auto& req : requests) {
    if (req.tokens.empty()) {
      out.push_back({req.id, {}, EmbeddingRows<float>(0, 0)});
      continue;
    }
    EmbeddingMatrix<float> m = provider.embed(req);
    if (m.tokens.size() != req.tokens.size() || m.vectors.rows() != static_cast<Eigen::Index>(req.tokens.size())) {
      throw ProtocolError("provider returned " + std::to_string(m.vectors.rows()) + " rows for " +
                          std::to_string(req.tokens.size()) + " tokens of '" + req.id + "'");
    }
    m.validate();
    out.push_back(std::move(m));
  }
  return out;
}

}  // namespace asreval
