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

// Comparison of local WERs with externally published benchmark WERs.

#ifndef ASREVAL_BENCHMARK_JOIN_HPP_
#define ASREVAL_BENCHMARK_JOIN_HPP_

#include <Eigen/Dense>

#include <algorithm>
#include <filesystem>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "asreval/report.hpp"

namespace asreval {

// 1-based ranks, ties share the mean of the ranks they span.
template <class Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> average_ranks(const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = x.size();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return x(a) < x(b); });
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> ranks(n);
  for (Eigen::Index i = 0; i < n;) {
    Eigen::Index j = i;
    while (j + 1 < n && x(order[static_cast<std::size_t>(j + 1)]) == x(order[static_cast<std::size_t>(i)])) ++j;
    const Scalar r = Scalar(i + j + 2) / Scalar(2);
    for (Eigen::Index k = i; k <= j; ++k) ranks(order[static_cast<std::size_t>(k)]) = r;
    i = j + 1;
  }
  return ranks;
}

// Pearson correlation of average ranks. Undefined for fewer than two points
// or when either side is constant.
template <class DerivedX, class DerivedY>
std::optional<double> spearman_rho(const Eigen::MatrixBase<DerivedX>& x, const Eigen::MatrixBase<DerivedY>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("spearman_rho: length mismatch");
  if (x.size() < 2) return std::nullopt;
  const Eigen::VectorXd rx = average_ranks(x.template cast<double>()).array() - (double(x.size()) + 1.0) / 2.0;
  const Eigen::VectorXd ry = average_ranks(y.template cast<double>()).array() - (double(y.size()) + 1.0) / 2.0;
  const double denom = std::sqrt(rx.squaredNorm() * ry.squaredNorm());
  if (!(denom > 0.0)) return std::nullopt;
  return rx.dot(ry) / denom;
}

struct ExternalResult {
  std::string model_id;
  std::string benchmark;
  double wer_pct = 0.0;
};

// CSV with header model,benchmark,wer_pct.
std::vector<ExternalResult> load_external_results(const std::filesystem::path& path);

struct ExternalEntry {
  double wer_pct = 0.0;
  double rank = 0.0;       // among every model listed for the benchmark
  std::size_t of = 0;
};

struct JoinRow {
  std::string model_id;
  double local_wer_pct = 0.0;
  double local_rank = 0.0;  // among every local model with a WER
  std::size_t local_of = 0;
  std::map<std::string, ExternalEntry> external;
};

struct BenchmarkAgreement {
  std::string benchmark;
  std::size_t joined = 0;
  std::optional<double> spearman;
};

struct BenchmarkJoin {
  std::vector<std::string> benchmarks;
  std::vector<JoinRow> rows;  // local WER ascending
  std::vector<BenchmarkAgreement> agreement;
};

// Throws std::invalid_argument when no model appears on both sides.
BenchmarkJoin external_benchmark_join(const std::vector<MetricReport>& reports,
                                      const std::vector<ExternalResult>& external);

std::string render_join(const BenchmarkJoin& join, ReportFormat format);

}  // namespace asreval

#endif  // ASREVAL_BENCHMARK_JOIN_HPP_
