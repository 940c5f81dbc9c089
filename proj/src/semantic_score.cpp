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

#include "asreval/semantic_score.hpp"

#include <cmath>
#include <unordered_set>

namespace asreval {

std::optional<double> score_run(std::span<const SemanticScore> scores, std::span<const double> ref_token_counts) {
  if (scores.size() != ref_token_counts.size()) {
    throw std::invalid_argument("score_run: one weight per score required");
  }
  double weighted = 0.0;
  double total = 0.0;
  bool any_scored = false;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    any_scored = any_scored || !scores[i].degenerate;
    weighted += ref_token_counts[i] * scores[i].f1_scaled;
    total += ref_token_counts[i];
  }
  if (!any_scored || !(total > 0.0)) return std::nullopt;
  return weighted / total;
}

IdfTable::IdfTable(std::span<const std::vector<std::string>> references) {
  std::unordered_map<std::string, std::size_t> df;
  for (const auto& ref : references) {
    std::unordered_set<std::string> seen(ref.begin(), ref.end());
    for (const auto& t : seen) ++df[t];
  }
  const double m = static_cast<double>(references.size());
  for (const auto& [token, count] : df) idf_[token] = std::log((m + 1.0) / (static_cast<double>(count) + 1.0));
  unseen_ = std::log(m + 1.0);
}

double IdfTable::operator()(const std::string& token) const {
  auto it = idf_.find(token);
  return it == idf_.end() ? unseen_ : it->second;
}

TokenWeights<double> IdfTable::weights(std::span<const std::string> tokens) const {
  TokenWeights<double> w(static_cast<Eigen::Index>(tokens.size()));
  for (std::size_t i = 0; i < tokens.size(); ++i) w(static_cast<Eigen::Index>(i)) = (*this)(tokens[i]);
  return w;
}

}  // namespace asreval
