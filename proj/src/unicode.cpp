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

#include <stdexcept>
#include <vector>

#include <unicode/uchar.h>
#include <unicode/unorm2.h>
#include <unicode/ustring.h>
#include <unicode/utf16.h>
#include <unicode/utf8.h>

namespace asreval::unicode {

namespace {

std::u16string to_utf16(std::u32string_view text) {
  std::u16string out;
  out.reserve(text.size());
  for (char32_t c : text) {
    if (c <= 0xFFFF) {
      out.push_back(static_cast<char16_t>(c));
    } else {
      out.push_back(static_cast<char16_t>(U16_LEAD(c)));
      out.push_back(static_cast<char16_t>(U16_TRAIL(c)));
    }
  }
  return out;
}

std::u32string from_utf16(std::u16string_view text) {
  std::u32string out;
  out.reserve(text.size());
  int32_t i = 0;
  const auto n = static_cast<int32_t>(text.size());
  while (i < n) {
    UChar32 c;
    U16_NEXT(text.data(), i, n, c);
    out.push_back(static_cast<char32_t>(c));
  }
  return out;
}

void check(UErrorCode status, const char* what) {
  if (U_FAILURE(status)) throw std::runtime_error(std::string(what) + ": " + u_errorName(status));
}

const UNormalizer2* nfc_instance() {
  UErrorCode status = U_ZERO_ERROR;
  const UNormalizer2* n = unorm2_getNFCInstance(&status);
  check(status, "unorm2_getNFCInstance");
  return n;
}

const UNormalizer2* nfkc_instance() {
  UErrorCode status = U_ZERO_ERROR;
  const UNormalizer2* n = unorm2_getNFKCInstance(&status);
  check(status, "unorm2_getNFKCInstance");
  return n;
}

std::u16string normalize16(const UNormalizer2* norm, std::u16string_view src) {
  if (src.empty()) return {};
  UErrorCode status = U_ZERO_ERROR;
  const auto len = static_cast<int32_t>(src.size());
  std::u16string out(src.size() * 3 + 8, u'\0');
  int32_t n = unorm2_normalize(norm, reinterpret_cast<const UChar*>(src.data()), len,
                               reinterpret_cast<UChar*>(out.data()), static_cast<int32_t>(out.size()), &status);
  if (status == U_BUFFER_OVERFLOW_ERROR) {
    status = U_ZERO_ERROR;
    out.assign(static_cast<std::size_t>(n), u'\0');
    n = unorm2_normalize(norm, reinterpret_cast<const UChar*>(src.data()), len,
                         reinterpret_cast<UChar*>(out.data()), n, &status);
  }
  check(status, "unorm2_normalize");
  out.resize(static_cast<std::size_t>(n));
  return out;
}

std::u16string lower16(std::u16string_view src) {
  if (src.empty()) return {};
  UErrorCode status = U_ZERO_ERROR;
  const auto len = static_cast<int32_t>(src.size());
  std::u16string out(src.size() * 3 + 8, u'\0');
  int32_t n = u_strToLower(reinterpret_cast<UChar*>(out.data()), static_cast<int32_t>(out.size()),
                           reinterpret_cast<const UChar*>(src.data()), len, "", &status);
  if (status == U_BUFFER_OVERFLOW_ERROR) {
    status = U_ZERO_ERROR;
    out.assign(static_cast<std::size_t>(n), u'\0');
    n = u_strToLower(reinterpret_cast<UChar*>(out.data()), n, reinterpret_cast<const UChar*>(src.data()), len,
                     "", &status);
  }
  check(status, "u_strToLower");
  out.resize(static_cast<std::size_t>(n));
  return out;
}

}  // namespace

std::u32string decode_utf8(std::string_view utf8) {
  std::u32string out;
  out.reserve(utf8.size());
  int32_t i = 0;
  const auto n = static_cast<int32_t>(utf8.size());
  const auto* s = reinterpret_cast<const uint8_t*>(utf8.data());
  while (i < n) {
    UChar32 c;
    U8_NEXT(s, i, n, c);
    out.push_back(c < 0 ? U'\uFFFD' : static_cast<char32_t>(c));
  }
  return out;
}

std::string encode_utf8(char32_t c) {
  std::string out;
  if (c < 0x80) {
    out.push_back(static_cast<char>(c));
  } else if (c < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (c >> 6)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  } else if (c < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (c >> 12)));
    out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (c >> 18)));
    out.push_back(static_cast<char>(0x80 | ((c >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  }
  return out;
}

std::string encode_utf8(std::u32string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char32_t c : text) out += encode_utf8(c);
  return out;
}

std::u32string nfc(std::u32string_view text) {
  return from_utf16(normalize16(nfc_instance(), to_utf16(text)));
}

std::string nfc(std::string_view utf8) { return encode_utf8(nfc(decode_utf8(utf8))); }

std::u32string to_lower(std::u32string_view text) {
  std::u32string lowered = from_utf16(lower16(to_utf16(text)));
  std::u32string out;
  out.reserve(lowered.size());
  for (char32_t c : lowered) {
    if (!is_uppercase(c)) {
      out.push_back(c);
      continue;
    }
    char16_t buf[2];
    std::u16string one;
    if (c <= 0xFFFF) {
      one.push_back(static_cast<char16_t>(c));
    } else {
      buf[0] = static_cast<char16_t>(U16_LEAD(c));
      buf[1] = static_cast<char16_t>(U16_TRAIL(c));
      one.assign(buf, 2);
    }
    for (char32_t d : from_utf16(lower16(normalize16(nfkc_instance(), one)))) {
      if (!is_uppercase(d)) out.push_back(d);
    }
  }
  return nfc(out);
}

bool is_space(char32_t c) {
  const auto cp = static_cast<UChar32>(c);
  return u_isUWhiteSpace(cp) || u_charType(cp) == U_CONTROL_CHAR;
}

bool is_punct(char32_t c) { return u_ispunct(static_cast<UChar32>(c)); }

bool is_symbol(char32_t c) {
  switch (u_charType(static_cast<UChar32>(c))) {
    case U_MATH_SYMBOL:
    case U_CURRENCY_SYMBOL:
    case U_MODIFIER_SYMBOL:
    case U_OTHER_SYMBOL:
      return true;
    default:
      return false;
  }
}

bool is_letter(char32_t c) { return u_isUAlphabetic(static_cast<UChar32>(c)); }

bool is_uppercase(char32_t c) { return u_isUUppercase(static_cast<UChar32>(c)); }

bool is_decimal_digit(char32_t c) { return u_charType(static_cast<UChar32>(c)) == U_DECIMAL_DIGIT_NUMBER; }

int digit_value(char32_t c) { return is_decimal_digit(c) ? u_charDigitValue(static_cast<UChar32>(c)) : -1; }

}  // namespace asreval::unicode
