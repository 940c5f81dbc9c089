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


#include "asreval/unicode.hpp"

#include <unicode/uchar.h>

#include "doctest.h"

namespace uc = asreval::unicode;

TEST_CASE("utf8 round trip and replacement") {
  const std::string s = "déjà vu \xF0\x9F\x98\x80";
  CHECK(uc::encode_utf8(uc::decode_utf8(s)) == s);
  const std::u32string bad = uc::decode_utf8("a\xFF" "b");
  CHECK(bad == std::u32string{U'a', U'�', U'b'});
}

TEST_CASE("nfc composes") {
  CHECK(uc::nfc("déjà") == "déjà");
  CHECK(uc::nfc("déjà") == "déjà");
}

TEST_CASE("lowercase leaves no uppercase letter anywhere in Unicode") {
  std::size_t scanned = 0;
  for (char32_t c = 0; c <= 0x10FFFF; ++c) {
    if (c >= 0xD800 && c <= 0xDFFF) continue;
    if (!uc::is_uppercase(c)) continue;
    ++scanned;
    const std::u32string lowered = uc::to_lower(std::u32string(1, c));
    for (char32_t l : lowered) {
      CAPTURE(static_cast<std::uint32_t>(c));
      CHECK_FALSE(uc::is_uppercase(l));
    }
  }
  CHECK(scanned > 1000);
}

TEST_CASE("character classes") {
  CHECK(uc::is_space(U' '));
  CHECK(uc::is_space(U'\t'));
  CHECK(uc::is_punct(U'«'));
  CHECK(uc::is_punct(U'‐'));
  CHECK(uc::is_symbol(U'€'));
  CHECK(uc::is_symbol(U'%') == false);
  CHECK(uc::is_punct(U'%'));
  CHECK(uc::is_letter(U'é'));
  CHECK(uc::is_decimal_digit(U'٣'));
  CHECK(uc::digit_value(U'٣') == 3);
  CHECK(uc::digit_value(U'３') == 3);
  CHECK_FALSE(uc::is_decimal_digit(U'²'));
}
