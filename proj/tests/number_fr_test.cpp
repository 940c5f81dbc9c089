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


#include "asreval/number_fr.hpp"

#include <random>
#include <set>

#include "doctest.h"
#include "oracles/french_numbers.hpp"

using namespace asreval;

namespace {

std::string joined(std::uint64_t n, NumberKind kind, GrammaticalGender g = GrammaticalGender::masculine) {
  std::string out;
  for (const auto& w : verbalize_number_fr(n, kind, g)) out += (out.empty() ? "" : " ") + w;
  return out;
}

}  // namespace

TEST_CASE("reference spellings") {
  CHECK(joined(0, NumberKind::cardinal) == "zéro");
  CHECK(joined(21, NumberKind::cardinal) == "vingt et un");
  CHECK(joined(71, NumberKind::cardinal) == "soixante et onze");
  CHECK(joined(80, NumberKind::cardinal) == "quatre vingts");
  CHECK(joined(81, NumberKind::cardinal) == "quatre vingt un");
  CHECK(joined(200, NumberKind::cardinal) == "deux cents");
  CHECK(joined(201, NumberKind::cardinal) == "deux cent un");
  CHECK(joined(1000, NumberKind::cardinal) == "mille");
  CHECK(joined(2000, NumberKind::cardinal) == "deux mille");
  CHECK(joined(80000, NumberKind::cardinal) == "quatre vingt mille");
  CHECK(joined(999999, NumberKind::cardinal) ==
        "neuf cent quatre vingt dix neuf mille neuf cent quatre vingt dix neuf");
  CHECK(joined(1, NumberKind::ordinal) == "premier");
  CHECK(joined(1, NumberKind::ordinal, GrammaticalGender::feminine) == "première");
  CHECK(joined(2, NumberKind::ordinal) == "deuxième");
  CHECK(joined(5, NumberKind::ordinal) == "cinquième");
  CHECK(joined(9, NumberKind::ordinal) == "neuvième");
  CHECK(joined(21, NumberKind::ordinal) == "vingt et unième");
  CHECK(joined(80, NumberKind::ordinal) == "quatre vingtième");
  CHECK(joined(1000, NumberKind::ordinal) == "millième");
}

TEST_CASE("range limit") {
  CHECK_NOTHROW(verbalize_number_fr(kMaxVerbalizedNumber, NumberKind::cardinal));
  CHECK_THROWS_AS(verbalize_number_fr(kMaxVerbalizedNumber + 1, NumberKind::cardinal), UnsupportedRange);
}

TEST_CASE("cardinals and ordinals agree with the oracle below 20000") {
  for (std::uint32_t n = 0; n < 20000; ++n) {
    CAPTURE(n);
    REQUIRE(joined(n, NumberKind::cardinal) == oracle::cardinal(n));
    if (n == 0) continue;
    REQUIRE(joined(n, NumberKind::ordinal) == oracle::ordinal(n));
    REQUIRE(joined(n, NumberKind::ordinal, GrammaticalGender::feminine) == oracle::ordinal(n, true));
  }
}

TEST_CASE("sampled agreement up to the limit") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::uint32_t> pick(20000, 999999);
  for (int k = 0; k < 5000; ++k) {
    const std::uint32_t n = pick(rng);
    CAPTURE(n);
    REQUIRE(joined(n, NumberKind::cardinal) == oracle::cardinal(n));
    REQUIRE(joined(n, NumberKind::ordinal) == oracle::ordinal(n));
  }
}

TEST_CASE("verbalization is injective") {
  std::set<std::string> seen;
  for (std::uint32_t n = 0; n <= 999999; n += (n < 100000 ? 1 : 7)) {
    REQUIRE(seen.insert(joined(n, NumberKind::cardinal)).second);
  }
}
