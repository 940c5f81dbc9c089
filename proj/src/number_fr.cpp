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

#include <array>
#include <string_view>

namespace asreval {

namespace {

using Tokens = std::vector<std::string>;

constexpr std::array<std::string_view, 17> kUnits = {
    "zéro", "un", "deux", "trois", "quatre", "cinq", "six", "sept", "huit",
    "neuf", "dix", "onze", "douze", "treize", "quatorze", "quinze", "seize"};

constexpr std::array<std::string_view, 7> kTens = {
    "", "dix", "vingt", "trente", "quarante", "cinquante", "soixante"};

void append(Tokens& out, const Tokens& more) { out.insert(out.end(), more.begin(), more.end()); }

// `last` is true when nothing follows in the number, which is when
// "vingt" and "cent" take the plural s.
Tokens below_hundred(unsigned n, bool last) {
  if (n < 17) return {std::string(kUnits[n])};
  if (n < 20) return {"dix", std::string(kUnits[n - 10])};

  const unsigned tens = n / 10;
  const unsigned unit = n % 10;
  if (tens <= 6) {
    Tokens out{std::string(kTens[tens])};
    if (unit == 1) {
      out.insert(out.end(), {"et", "un"});
    } else if (unit != 0) {
      out.emplace_back(kUnits[unit]);
    }
    return out;
  }
  if (tens == 7) {
    Tokens out{"soixante"};
    if (unit == 1) {
      out.insert(out.end(), {"et", "onze"});
    } else {
      append(out, below_hundred(10 + unit, last));
    }
    return out;
  }
  // 80..99
  if (n == 80) return {"quatre", last ? "vingts" : "vingt"};
  Tokens out{"quatre", "vingt"};
  append(out, below_hundred(n - 80, last));
  return out;
}

Tokens below_thousand(unsigned n, bool last) {
  const unsigned hundreds = n / 100;
  const unsigned rest = n % 100;
  Tokens out;
  if (hundreds == 1) {
    out.emplace_back("cent");
  } else if (hundreds > 1) {
    out.emplace_back(kUnits[hundreds]);
    out.emplace_back(rest == 0 && last ? "cents" : "cent");
  }
  if (rest != 0 || hundreds == 0) append(out, below_hundred(rest, last));
  return out;
}

Tokens cardinal(unsigned n) {
  if (n == 0) return {"zéro"};
  const unsigned thousands = n / 1000;
  const unsigned rest = n % 1000;
  Tokens out;
  if (thousands == 1) {
    out.emplace_back("mille");
  } else if (thousands > 1) {
    out = below_thousand(thousands, false);
    out.emplace_back("mille");
  }
  if (rest != 0) append(out, below_thousand(rest, true));
  return out;
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

std::string ordinal_of_word(std::string word) {
  if (word == "cinq") return "cinquième";
  if (word == "neuf") return "neuvième";
  if (word == "vingts" || word == "cents") word.pop_back();
  if (ends_with(word, "e")) word.pop_back();
  return word + "ième";
}

}  // namespace

std::vector<std::string> verbalize_number_fr(std::uint64_t n, NumberKind kind, GrammaticalGender gender) {
  if (n > kMaxVerbalizedNumber) {
    throw UnsupportedRange("number " + std::to_string(n) + " is outside the verbalization range");
  }
  Tokens words = cardinal(static_cast<unsigned>(n));
  if (kind == NumberKind::cardinal) return words;
  if (n == 1) return {gender == GrammaticalGender::feminine ? "première" : "premier"};
  words.back() = ordinal_of_word(std::move(words.back()));
  return words;
}

}  // namespace asreval
