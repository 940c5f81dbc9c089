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

// Thin UTF-8 / code point helpers over ICU. Malformed UTF-8 decodes to U+FFFD.

#ifndef ASREVAL_UNICODE_HPP_
#define ASREVAL_UNICODE_HPP_

#include <optional>
#include <string>
#include <string_view>

namespace asreval::unicode {

std::u32string decode_utf8(std::string_view utf8);
std::string encode_utf8(std::u32string_view text);
std::string encode_utf8(char32_t c);

// Canonical composition (NFC).
std::string nfc(std::string_view utf8);
std::u32string nfc(std::u32string_view text);

// Full lowercase mapping, then NFC. Characters that stay uppercase under
// the mapping (e.g. mathematical capitals) are compatibility-decomposed
// and lowercased again; anything still uppercase after that is dropped.
std::u32string to_lower(std::u32string_view text);

bool is_space(char32_t c);           // White_Space or a control character
bool is_punct(char32_t c);           // general category P*
bool is_symbol(char32_t c);          // general category S*
bool is_letter(char32_t c);          // Alphabetic
bool is_uppercase(char32_t c);       // Uppercase property
bool is_decimal_digit(char32_t c);   // general category Nd
int digit_value(char32_t c);         // 0..9 for Nd, -1 otherwise

}  // namespace asreval::unicode

#endif  // ASREVAL_UNICODE_HPP_
