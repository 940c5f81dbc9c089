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

#include "asreval/align.hpp"

#include <cctype>

#include "asreval/unicode.hpp"

namespace asreval {

std::vector<std::string> word_tokens(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    if (j > i) out.emplace_back(text.substr(i, j - i));
    i = j;
  }
  return out;
}

std::vector<std::string> char_tokens(std::string_view text) {
  std::vector<std::string> out;
  for (char32_t c : unicode::decode_utf8(text)) out.push_back(unicode::encode_utf8(c));
  return out;
}

AlignmentResult align_words(std::string_view ref_text, std::string_view hyp_text) {
  return align(word_tokens(ref_text), word_tokens(hyp_text), Unit::word);
}

AlignmentResult align_chars(std::string_view ref_text, std::string_view hyp_text) {
  const std::u32string ref = unicode::decode_utf8(ref_text);
  const std::u32string hyp = unicode::decode_utf8(hyp_text);
  return align(std::span<const char32_t>(ref), std::span<const char32_t>(hyp), Unit::character);
}

}  // namespace asreval
