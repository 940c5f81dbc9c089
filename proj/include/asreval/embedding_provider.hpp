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

// Sources of contextual token embeddings.
//
//   deterministic   built-in, hash-seeded unit vectors (tests, no model)
//   subprocess      external encoder speaking the exchange protocol
//   replay          directory of exchange payloads keyed by text hash
//
// CachingProvider wraps any of them with an on-disk cache keyed by
// (provider id, text hash).

#ifndef ASREVAL_EMBEDDING_PROVIDER_HPP_
#define ASREVAL_EMBEDDING_PROVIDER_HPP_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "asreval/exchange_format.hpp"
#include "asreval/process.hpp"
#include "asreval/semantic_score.hpp"

namespace asreval {

// Provider crashed, timed out or could not be started.
class ProviderError : public std::runtime_error {
 public:
  ProviderError(const std::string& utterance_id, const std::string& what);
  const std::string& utterance_id() const { return utterance_id_; }

 private:
  std::string utterance_id_;
};

class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;

  virtual std::string id() const = 0;

  // One row per token, in token order. Implementations need not be
  // thread-safe; callers issue one request at a time.
  EmbeddingMatrix<float> embed(const EmbeddingRequest& request);

  std::uint64_t calls() const { return calls_; }

 protected:
  virtual EmbeddingMatrix<float> do_embed(const EmbeddingRequest& request) = 0;

 private:
  std::uint64_t calls_ = 0;
};

class DeterministicProvider final : public EmbeddingProvider {
 public:
  static constexpr int kDefaultDim = 32;

  explicit DeterministicProvider(std::uint64_t seed = 0, int dim = kDefaultDim);
  std::string id() const override;

  // Unit vector for `token` at `position`; a pure function of
  // (seed, token, position), bit-identical across platforms.
  Eigen::RowVectorXf row(const std::string& token, std::size_t position) const;

 protected:
  EmbeddingMatrix<float> do_embed(const EmbeddingRequest& request) override;

 private:
  std::uint64_t seed_;
  int dim_;
};

class SubprocessProvider final : public EmbeddingProvider {
 public:
  SubprocessProvider(std::string command, Seconds timeout = Seconds(120));
  ~SubprocessProvider() override;
  std::string id() const override;

 protected:
  EmbeddingMatrix<float> do_embed(const EmbeddingRequest& request) override;

 private:
  void ensure_started(const std::string& utterance_id);

  std::string command_;
  Seconds timeout_;
  std::unique_ptr<ChildProcess> child_;
};

class ReplayProvider final : public EmbeddingProvider {
 public:
  // `provider_id` is the id of the provider that produced the payloads.
  ReplayProvider(std::filesystem::path dir, std::string provider_id);
  std::string id() const override { return provider_id_; }

 protected:
  EmbeddingMatrix<float> do_embed(const EmbeddingRequest& request) override;

 private:
  std::filesystem::path dir_;
  std::string provider_id_;
};

class CachingProvider final : public EmbeddingProvider {
 public:
  CachingProvider(std::unique_ptr<EmbeddingProvider> inner, std::filesystem::path cache_dir);
  std::string id() const override { return inner_->id(); }

  const EmbeddingProvider& inner() const { return *inner_; }
  std::uint64_t hits() const { return hits_; }

  std::filesystem::path entry_path(std::span<const std::string> tokens) const;

 protected:
  EmbeddingMatrix<float> do_embed(const EmbeddingRequest& request) override;

 private:
  std::unique_ptr<EmbeddingProvider> inner_;
  std::filesystem::path cache_dir_;
  std::uint64_t hits_ = 0;
};

// Cache file name for a token list: SHA-256 of the tokens joined by U+001F.
std::string text_hash(std::span<const std::string> tokens);

// Directory component for a provider id (path separators replaced).
std::string provider_dir_name(const std::string& provider_id);

// "deterministic", "deterministic:<dim>", "subprocess:<command>",
// "replay:<dir>".
std::unique_ptr<EmbeddingProvider> make_provider(const std::string& spec, std::uint64_t seed);

// Embeds each token list; empty lists yield a 0 x 0 matrix without a
// provider call. Replies must echo the request's token count.
std::vector<EmbeddingMatrix<float>> request_embeddings(std::span<const EmbeddingRequest> requests,
                                                       EmbeddingProvider& provider);

}  // namespace asreval

#endif  // ASREVAL_EMBEDDING_PROVIDER_HPP_
