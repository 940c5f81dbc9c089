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

// Table-driven French number names, written independently of the library.
// Below 100 every name is spelled out literally; larger numbers are built
// from the table with the hundreds/thousands composition rules. Hyphens are
// already replaced by spaces.

#ifndef ASREVAL_TESTS_ORACLES_FRENCH_NUMBERS_HPP_
#define ASREVAL_TESTS_ORACLES_FRENCH_NUMBERS_HPP_

#include <array>
#include <cstdint>
#include <string>

namespace oracle {

inline const std::array<const char*, 100> kBelowHundred = {
    "zéro", "un", "deux", "trois", "quatre", "cinq", "six", "sept", "huit", "neuf", "dix", "onze",
    "douze", "treize", "quatorze", "quinze", "seize", "dix sept", "dix huit", "dix neuf", "vingt",
    "vingt et un", "vingt deux", "vingt trois", "vingt quatre", "vingt cinq", "vingt six",
    "vingt sept", "vingt huit", "vingt neuf", "trente", "trente et un", "trente deux",
    "trente trois", "trente quatre", "trente cinq", "trente six", "trente sept", "trente huit",
    "trente neuf", "quarante", "quarante et un", "quarante deux", "quarante trois",
    "quarante quatre", "quarante cinq", "quarante six", "quarante sept", "quarante huit",
    "quarante neuf", "cinquante", "cinquante et un", "cinquante deux", "cinquante trois",
    "cinquante quatre", "cinquante cinq", "cinquante six", "cinquante sept", "cinquante huit",
    "cinquante neuf", "soixante", "soixante et un", "soixante deux", "soixante trois",
    "soixante quatre", "soixante cinq", "soixante six", "soixante sept", "soixante huit",
    "soixante neuf", "soixante dix", "soixante et onze", "soixante douze", "soixante treize",
    "soixante quatorze", "soixante quinze", "soixante seize", "soixante dix sept",
    "soixante dix huit", "soixante dix neuf", "quatre vingts", "quatre vingt un",
    "quatre vingt deux", "quatre vingt trois", "quatre vingt quatre", "quatre vingt cinq",
    "quatre vingt six", "quatre vingt sept", "quatre vingt huit", "quatre vingt neuf",
    "quatre vingt dix", "quatre vingt onze", "quatre vingt douze", "quatre vingt treize",
    "quatre vingt quatorze", "quatre vingt quinze", "quatre vingt seize", "quatre vingt dix sept",
    "quatre vingt dix huit", "quatre vingt dix neuf",
};

inline std::string join(const std::string& a, const std::string& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  return a + " " + b;
}

// 0 <= n < 1000; "" for 0 so callers can compose.
inline std::string hundreds(unsigned n) {
  const unsigned c = n / 100;
  const unsigned r = n % 100;
  std::string head;
  if (c == 1) head = "cent";
  if (c > 1) head = std::string(kBelowHundred[c]) + (r == 0 ? " cents" : " cent");
  return join(head, r ? kBelowHundred[r] : "");
}

// "quatre vingts" and "deux cents" lose their s before "mille".
inline std::string drop_plural(std::string s) {
  for (const char* w : {"vingts", "cents"}) {
    const std::string word(w);
    if (s.size() >= word.size() && s.compare(s.size() - word.size(), word.size(), word) == 0) s.pop_back();
  }
  return s;
}

inline std::string cardinal(std::uint32_t n) {
  if (n < 100) return kBelowHundred[n];
  const unsigned t = n / 1000;
  const unsigned r = n % 1000;
  std::string head;
  if (t == 1) head = "mille";
  if (t > 1) head = drop_plural(hundreds(t)) + " mille";
  return join(head, hundreds(r));
}

// Ordinal spelling: "premier"/"premiere" for 1, otherwise the cardinal
// with its final word respelled before "ième".
inline std::string ordinal(std::uint32_t n, bool feminine = false) {
  if (n == 1) return feminine ? "premi\u00e8re" : "premier";
  std::string c = cardinal(n);
  const auto space = c.rfind(' ');
  std::string head = space == std::string::npos ? "" : c.substr(0, space + 1);
  std::string last = space == std::string::npos ? c : c.substr(space + 1);
  static const std::array<std::pair<const char*, const char*>, 21> kLast = {{
      {"z\u00e9ro", "z\u00e9roi\u00e8me"}, {"un", "uni\u00e8me"}, {"deux", "deuxi\u00e8me"},
      {"trois", "troisi\u00e8me"}, {"quatre", "quatri\u00e8me"}, {"cinq", "cinqui\u00e8me"},
      {"six", "sixi\u00e8me"}, {"sept", "septi\u00e8me"}, {"huit", "huiti\u00e8me"},
      {"neuf", "neuvi\u00e8me"}, {"dix", "dixi\u00e8me"}, {"onze", "onzi\u00e8me"},
      {"douze", "douzi\u00e8me"}, {"treize", "treizi\u00e8me"}, {"quatorze", "quatorzi\u00e8me"},
      {"quinze", "quinzi\u00e8me"}, {"seize", "seizi\u00e8me"}, {"vingt", "vingti\u00e8me"},
      {"trente", "trenti\u00e8me"}, {"quarante", "quaranti\u00e8me"}, {"cinquante", "cinquanti\u00e8me"},
  }};
  static const std::array<std::pair<const char*, const char*>, 6> kMore = {{
      {"soixante", "soixanti\u00e8me"}, {"vingts", "vingti\u00e8me"}, {"cent", "centi\u00e8me"},
      {"cents", "centi\u00e8me"}, {"mille", "milli\u00e8me"}, {"", ""},
  }};
  for (const auto& [from, to] : kLast) {
    if (last == from) return head + to;
  }
  for (const auto& [from, to] : kMore) {
    if (*from && last == from) return head + to;
  }
  return "?";
}

}  // namespace oracle

#endif  // ASREVAL_TESTS_ORACLES_FRENCH_NUMBERS_HPP_
