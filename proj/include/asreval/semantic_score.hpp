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

// BERTScore-style greedy matching over contextual token embeddings.
//
// Rows are scaled to unit norm, so the similarity matrix of a reference
// (T_r x D) and hypothesis (T_h x D) pair is one product:
//
//   S = normalize(ref) * normalize(hyp)^T
//   recall    = mean_i max_j S(i, j)
//   precision = mean_j max_i S(i, j)
//
// Maxima are clamped to [0, 1] by default, which keeps F1 x 100 in
// [0, 100]. No baseline rescaling is applied.

#ifndef ASREVAL_SEMANTIC_SCORE_HPP_
#define ASREVAL_SEMANTIC_SCORE_HPP_

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace asreval {

template <class Scalar>
using EmbeddingRows = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <class Scalar>
using TokenWeights = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

class EmbeddingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One utterance side: a row per token.
template <class Scalar>
struct EmbeddingMatrix {
  std::string utterance_id;
  std::vector<std::string> tokens;
  EmbeddingRows<Scalar> vectors;

  Eigen::Index dim() const { return vectors.cols(); }
  bool empty() const { return tokens.empty(); }

  // Row count must equal token count and every row must have positive norm.
  void validate() const {
    if (vectors.rows() != static_cast<Eigen::Index>(tokens.size())) {
      throw EmbeddingError("embedding for '" + utterance_id + "' has " + std::to_string(vectors.rows()) +
                           " rows for " + std::to_string(tokens.size()) + " tokens");
    }
    for (Eigen::Index i = 0; i < vectors.rows(); ++i) {
      if (!(vectors.row(i).squaredNorm() > Scalar(0))) {
        throw EmbeddingError("embedding for '" + utterance_id + "' has a zero vector at row " + std::to_string(i));
      }
    }
  }

  template <class Other>
  EmbeddingMatrix<Other> cast() const {
    return {utterance_id, tokens, vectors.template cast<Other>()};
  }
};

struct SemanticScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1_scaled = 0.0;  // 100 * F1
  // Set when either side has no tokens; f1_scaled is then 0.
  bool degenerate = false;
};

struct GreedyMatchOptions {
  bool clamp_negative = true;
};

namespace detail {

template <class Scalar, class Derived>
Scalar weighted_mean(const Eigen::MatrixBase<Derived>& values, const TokenWeights<Scalar>* weights) {
  if (!weights) return values.mean();
  const Scalar total = weights->sum();
  if (!(total > Scalar(0))) return Scalar(0);
  return values.cwiseProduct(*weights).sum() / total;
}

}  // namespace detail

// Greedy max-cosine matching of two embedding blocks. Weights, when given,
// are per-token importance weights (e.g. idf) for the respective side.
template <class DerivedRef, class DerivedHyp>
SemanticScore greedy_match_score(const Eigen::MatrixBase<DerivedRef>& ref, const Eigen::MatrixBase<DerivedHyp>& hyp,
                                 GreedyMatchOptions options = {},
                                 const TokenWeights<typename DerivedRef::Scalar>* ref_weights = nullptr,
                                 const TokenWeights<typename DerivedRef::Scalar>* hyp_weights = nullptr) {
  using Scalar = typename DerivedRef::Scalar;
  static_assert(std::is_same_v<Scalar, typename DerivedHyp::Scalar>, "scalar types must match");

  SemanticScore score;
  if (ref.rows() == 0 || hyp.rows() == 0) {
    score.degenerate = true;
    return score;
  }
  if (ref.cols() != hyp.cols()) {
    throw EmbeddingError("embedding dimension mismatch: " + std::to_string(ref.cols()) + " vs " +
                         std::to_string(hyp.cols()));
  }

  const EmbeddingRows<Scalar> ref_unit = ref.rowwise().normalized();
  const EmbeddingRows<Scalar> hyp_unit = hyp.rowwise().normalized();
  const EmbeddingRows<Scalar> similarity = ref_unit * hyp_unit.transpose();

  const Scalar lo = options.clamp_negative ? Scalar(0) : Scalar(-1);
  const TokenWeights<Scalar> best_for_ref = similarity.rowwise().maxCoeff().cwiseMax(lo).cwiseMin(Scalar(1));
  const TokenWeights<Scalar> best_for_hyp =
      similarity.colwise().maxCoeff().transpose().cwiseMax(lo).cwiseMin(Scalar(1));

  const double recall = static_cast<double>(detail::weighted_mean(best_for_ref, ref_weights));
  const double precision = static_cast<double>(detail::weighted_mean(best_for_hyp, hyp_weights));
  score.recall = recall;
  score.precision = precision;
  score.f1_scaled = precision + recall > 0.0 ? 100.0 * 2.0 * precision * recall / (precision + recall) : 0.0;
  return score;
}

template <class Scalar>
SemanticScore greedy_match_score(const EmbeddingMatrix<Scalar>& ref, const EmbeddingMatrix<Scalar>& hyp,
                                 GreedyMatchOptions options = {}, const TokenWeights<Scalar>* ref_weights = nullptr,
                                 const TokenWeights<Scalar>* hyp_weights = nullptr) {
  if (!ref.empty() && !hyp.empty() && ref.dim() != hyp.dim()) {
    throw EmbeddingError("embedding dimension mismatch between '" + ref.utterance_id + "' (" +
                         std::to_string(ref.dim()) + ") and '" + hyp.utterance_id + "' (" +
                         std::to_string(hyp.dim()) + ")");
  }
  return greedy_match_score(ref.vectors, hyp.vectors, options, ref_weights, hyp_weights);
}

// Corpus score: reference-token-count weighted mean of per-utterance
// f1_scaled. Degenerate pairs count as 0; the result is undefined when the
// input is empty, every pair is degenerate, or the weights sum to zero.
std::optional<double> score_run(std::span<const SemanticScore> scores, std::span<const double> ref_token_counts);

// idf(w) = ln((M + 1) / (df(w) + 1)) over M reference token lists.
class IdfTable {
 public:
  IdfTable() = default;
  explicit IdfTable(std::span<const std::vector<std::string>> references);

  double operator()(const std::string& token) const;
  TokenWeights<double> weights(std::span<const std::string> tokens) const;

 private:
  std::unordered_map<std::string, double> idf_;
  double unseen_ = 0.0;
};

}  // namespace asreval

#endif  // ASREVAL_SEMANTIC_SCORE_HPP_
