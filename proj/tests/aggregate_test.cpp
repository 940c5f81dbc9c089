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


#include "asreval/aggregate.hpp"

#include "doctest.h"

using namespace asreval;

namespace {

AlignmentResult words(std::uint64_t n, std::uint64_t s, std::uint64_t i, std::uint64_t d) {
  return {Unit::word, n, s, i, d, n - s - d};
}

UtteranceRecord rec(std::string id, Gender g, std::string dataset, Split split) {
  return {std::move(id), std::nullopt, 1.0, "x", "spk", g, std::move(dataset), split};
}

}  // namespace

TEST_CASE("micro averaging") {
  const std::vector<AlignmentResult> pair = {words(10, 1, 0, 0), words(10, 0, 1, 1)};
  CHECK(*aggregate(pair).wer_pct == doctest::Approx(15.0));
  const std::vector<AlignmentResult> single = {words(7, 1, 1, 1)};
  CHECK(*aggregate(single).wer_pct == doctest::Approx(*single[0].error_rate_pct()));

  // 1/10 and 5/30 errors: micro gives 6/40, the per-utterance mean would not.
  const std::vector<AlignmentResult> rs = {words(10, 1, 0, 0), words(30, 2, 1, 2)};
  const AggregateMetrics m = aggregate(rs);
  CHECK(*m.wer_pct == doctest::Approx(15.0));
  CHECK(m.total_ref_words() == 40);
  CHECK_FALSE(m.cer_pct);
}

TEST_CASE("deletion insertion ratio") {
  AlignmentTotals t;
  t.n_ref = 100;
  t.deletions = 41;
  t.insertions = 20;
  CHECK(*deletion_insertion_ratio(t) == doctest::Approx(2.05));
  CHECK(*skip_corrected_wer_pct(t) == doctest::Approx(100.0 * (0 + 20 + 20) / 100.0));

  t.insertions = 0;
  CHECK_FALSE(deletion_insertion_ratio(t));
  CHECK(*skip_corrected_wer_pct(t) == 0.0);

  AlignmentTotals empty;
  CHECK_FALSE(skip_corrected_wer_pct(empty));
}

TEST_CASE("totals and units") {
  AlignmentTotals t;
  t += words(4, 1, 2, 1);
  t += words(3, 0, 0, 0);
  CHECK(t.n_ref == 7);
  CHECK(t.errors() == 4);
  CHECK(t.correct == 5);
  const std::vector<AlignmentResult> mixed = {words(1, 0, 0, 0), {Unit::character, 1, 0, 0, 0, 1}};
  CHECK_THROWS_AS(sum_alignments(mixed), std::invalid_argument);
  CHECK_FALSE(aggregate(std::vector<AlignmentResult>{}).wer_pct);
}

TEST_CASE("strata parsing") {
  const auto s = parse_strata("gender, dataset+split");
  REQUIRE(s.size() == 2);
  CHECK(s[0].name() == "gender");
  CHECK(s[1].keys == std::vector<std::string>{"dataset", "split"});
  CHECK(s[1].name() == "dataset+split");
  CHECK(parse_strata("").empty());
  CHECK_THROWS_AS(parse_strata("accent"), std::invalid_argument);
}

TEST_CASE("grouping") {
  const Manifest m({rec("a", Gender::male, "x", Split::dev), rec("b", Gender::female, "y", Split::test),
                    rec("c", Gender::unknown, "x", Split::test), rec("d", Gender::male, "x", Split::test)});
  const auto groups = group_utterances(m, parse_strata("gender,dataset+split"));
  REQUIRE(groups.size() == 1 + 2 + 3);
  CHECK(groups[0].label == "all");
  CHECK(groups[0].members.size() == 4);
  CHECK(groups[1].by == "gender");
  CHECK(groups[1].label == "female");
  CHECK(groups[2].members == std::vector<std::size_t>{0, 3});
  CHECK(groups[3].label == "x/dev");
  CHECK(groups[4].label == "x/test");
  CHECK(groups[4].members == std::vector<std::size_t>{2, 3});
  CHECK(groups[5].label == "y/test");

  // Every non-overall stratum partitions the utterances it labels.
  std::size_t labelled = 0;
  for (std::size_t g = 3; g < groups.size(); ++g) labelled += groups[g].members.size();
  CHECK(labelled == m.size());
}
