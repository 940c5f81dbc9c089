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
#include <random>

#include "asreval/embedding_provider.hpp"
#include "doctest.h"

using namespace asreval;

namespace {

EmbeddingRows<double> rows(std::initializer_list<std::initializer_list<double>> init) {
  EmbeddingRows<double> m(static_cast<Eigen::Index>(init.size()), static_cast<Eigen::Index>(init.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& r : init) {
    Eigen::Index j = 0;
    for (double x : r) m(i, j++) = x;
    ++i;
  }
  return m;
}

}  // namespace

TEST_CASE("orthonormal tokens") {
  // Reference e1 e2, hypothesis e1: recall 1/2, precision 1.
  const auto ref = rows({{1, 0, 0}, {0, 1, 0}});
  const auto hyp = rows({{1, 0, 0}});
  const SemanticScore s = greedy_match_score(ref, hyp);
  CHECK(s.recall == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(s.precision == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(s.f1_scaled - 200.0 / 3.0) < 1e-9);
  CHECK_FALSE(s.degenerate);
}

TEST_CASE("identical inputs score 100") {
  const auto ref = rows({{1, 2, 3}, {-1, 0, 4}});
  CHECK(greedy_match_score(ref, ref).f1_scaled == doctest::Approx(100.0));
}

TEST_CASE("degenerate and mismatched inputs") {
  const auto ref = rows({{1, 0}});
  const EmbeddingRows<double> none(0, 2);
  CHECK(greedy_match_score(ref, none).degenerate);
  CHECK(greedy_match_score(none, ref).f1_scaled == 0.0);
  CHECK_THROWS_AS(greedy_match_score(ref, rows({{1, 0, 0}})), EmbeddingError);
}

TEST_CASE("negative similarity clamps to zero") {
  const auto ref = rows({{1, 0}});
  const auto hyp = rows({{-1, 0}});
  CHECK(greedy_match_score(ref, hyp).f1_scaled == 0.0);
  const SemanticScore raw = greedy_match_score(ref, hyp, {false});
  CHECK(raw.recall == doctest::Approx(-1.0));
}

TEST_CASE("invariances on random embeddings") {
  DeterministicProvider provider(17);
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> len(1, 12);
  std::uniform_real_distribution<double> scale(0.01, 100.0);
  for (int k = 0; k < 300; ++k) {
    EmbeddingRequest a{"a", {}}, b{"b", {}};
    for (int i = len(rng); i > 0; --i) a.tokens.push_back("t" + std::to_string(rng() % 20));
    for (int i = len(rng); i > 0; --i) b.tokens.push_back("t" + std::to_string(rng() % 20));
    const EmbeddingRows<double> ra = provider.embed(a).vectors.cast<double>();
    const EmbeddingRows<double> rb = provider.embed(b).vectors.cast<double>();
    const SemanticScore s = greedy_match_score(ra, rb);
    const SemanticScore swapped = greedy_match_score(rb, ra);

    CHECK(s.precision == doctest::Approx(swapped.recall).epsilon(1e-12));
    CHECK(s.f1_scaled == doctest::Approx(swapped.f1_scaled).epsilon(1e-12));
    CHECK(s.f1_scaled >= 0.0);
    CHECK(s.f1_scaled <= 100.0 + 1e-9);

    EmbeddingRows<double> scaled = ra;
    for (Eigen::Index i = 0; i < scaled.rows(); ++i) scaled.row(i) *= scale(rng);
    CHECK(greedy_match_score(scaled, rb).f1_scaled == doctest::Approx(s.f1_scaled).epsilon(1e-9));

    std::vector<Eigen::Index> perm(static_cast<std::size_t>(rb.rows()));
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    EmbeddingRows<double> permuted(rb.rows(), rb.cols());
    for (Eigen::Index i = 0; i < rb.rows(); ++i) permuted.row(i) = rb.row(perm[static_cast<std::size_t>(i)]);
    CHECK(greedy_match_score(ra, permuted).f1_scaled == doctest::Approx(s.f1_scaled).epsilon(1e-9));
  }
}

TEST_CASE("float and double agree") {
  DeterministicProvider provider(3);
  const auto a = provider.embed({"a", {"x", "y", "z"}});
  const auto b = provider.embed({"b", {"y", "w"}});
  const double f = greedy_match_score(a, b).f1_scaled;
  const double d = greedy_match_score(a.cast<double>(), b.cast<double>()).f1_scaled;
  CHECK(f == doctest::Approx(d).epsilon(1e-5));
}

TEST_CASE("run score weights utterances by reference length") {
  std::vector<SemanticScore> scores(2);
  scores[0].f1_scaled = 90.0;
  scores[1].f1_scaled = 80.0;
  const std::vector<double> counts = {1.0, 1.0};
  CHECK(*score_run(scores, counts) == doctest::Approx(85.0));
  const std::vector<double> skew = {3.0, 1.0};
  CHECK(*score_run(scores, skew) == doctest::Approx(87.5));

  scores[1].degenerate = true;
  scores[1].f1_scaled = 0.0;
  CHECK(*score_run(scores, counts) == doctest::Approx(45.0));

  std::vector<SemanticScore> all_degenerate(1);
  all_degenerate[0].degenerate = true;
  CHECK_FALSE(score_run(all_degenerate, std::vector<double>{1.0}));
  CHECK_FALSE(score_run({}, {}));
  CHECK_THROWS_AS(score_run(scores, std::vector<double>{1.0}), std::invalid_argument);
}

TEST_CASE("idf weights") {
  const std::vector<std::vector<std::string>> refs = {{"le", "chat"}, {"le", "chien"}, {"le"}};
  const IdfTable idf(refs);
  CHECK(idf("le") == doctest::Approx(std::log(4.0 / 4.0)));
  CHECK(idf("chat") == doctest::Approx(std::log(4.0 / 2.0)));
  CHECK(idf("zèbre") == doctest::Approx(std::log(4.0)));
  const std::vector<std::string> toks = {"chat", "le"};
  const auto w = idf.weights(toks);
  CHECK(w.size() == 2);
  CHECK(w(0) > w(1));

  // With IDF weights the common token stops counting.
  const auto ref = rows({{1, 0}, {0, 1}});
  const auto hyp = rows({{0, 1}});
  const TokenWeights<double> rw = w;
  const TokenWeights<double> hw = idf.weights(std::vector<std::string>{"le"});
  const SemanticScore s = greedy_match_score(ref, hyp, {}, &rw, &hw);
  CHECK(s.recall == doctest::Approx(0.0));
}
