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

#include "asreval/normalizer.hpp"

#include <algorithm>
#include <array>
#include <utility>

#include "asreval/hashing.hpp"
#include "asreval/number_fr.hpp"
#include "asreval/unicode.hpp"

namespace asreval {

namespace {

namespace uc = unicode;

constexpr char32_t kApostrophe = U'\'';

bool is_hyphen(char32_t c) { return c == U'-' || c == U'\u2010' || c == U'\u2011'; }

bool is_word_char(char32_t c) { return uc::is_letter(c) || uc::is_decimal_digit(c); }

std::u32string prenormalize(std::u32string_view text) {
  std::u32string out = uc::nfc(text);
  for (char32_t& c : out) {
    if (c == U'\u2019') {
      c = kApostrophe;
    } else if (c == U'\u00A0' || c == U'\u202F' || c == U'\u2007') {
      c = U' ';
    }
  }
  return out;
}

// Deletes the union of all matched ( ) and [ ] pairs. A closing bracket
// that does not match the innermost open one is left as a literal, and so
// is an open bracket that never closes.
std::u32string remove_bracketed(const std::u32string& text) {
  std::vector<std::pair<std::size_t, char32_t>> open;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char32_t c = text[i];
    if (c == U'(' || c == U'[') {
      open.emplace_back(i, c == U'(' ? U')' : U']');
    } else if ((c == U')' || c == U']') && !open.empty() && open.back().second == c) {
      pairs.emplace_back(open.back().first, i);
      open.pop_back();
    }
  }
  if (pairs.empty()) return text;

  // Pairs nest properly, so after sorting by start the outermost ones are
  // those not inside the previous kept span.
  std::sort(pairs.begin(), pairs.end());
  std::u32string out;
  out.reserve(text.size());
  std::size_t pos = 0;
  for (const auto& [first, last] : pairs) {
    if (first < pos) continue;
    out.append(text, pos, first - pos);
    out.push_back(U' ');
    pos = last + 1;
  }
  out.append(text, pos, std::u32string::npos);
  return out;
}

struct OrdinalSuffix {
  std::u32string_view text;
  GrammaticalGender gender;
};

// Longest first.
constexpr std::array<OrdinalSuffix, 6> kOrdinalSuffixes = {{
    {U"ème", GrammaticalGender::masculine},
    {U"eme", GrammaticalGender::masculine},
    {U"ère", GrammaticalGender::feminine},
    {U"er", GrammaticalGender::masculine},
    {U"re", GrammaticalGender::feminine},
    {U"e", GrammaticalGender::masculine},
}};

// Ordinal suffix starting at `pos` and ending at a word boundary.
const OrdinalSuffix* match_ordinal_suffix(const std::u32string& text, std::size_t pos) {
  for (const auto& suffix : kOrdinalSuffixes) {
    if (text.compare(pos, suffix.text.size(), suffix.text) != 0) continue;
    const std::size_t end = pos + suffix.text.size();
    if (end < text.size() && is_word_char(text[end])) continue;
    return &suffix;
  }
  return nullptr;
}

std::u32string separate_digits(const std::u32string& text) {
  std::u32string out;
  out.reserve(text.size() + 8);
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char32_t c = text[i];
    out.push_back(c);
    if (i + 1 >= text.size()) break;
    const char32_t next = text[i + 1];
    if (uc::is_decimal_digit(c) && uc::is_letter(next)) {
      if (!match_ordinal_suffix(text, i + 1)) out.push_back(U' ');
    } else if (uc::is_letter(c) && uc::is_decimal_digit(next)) {
      out.push_back(U' ');
    }
  }
  return out;
}

std::u32string verbalize_numbers(const std::u32string& text, std::vector<std::string>& warnings) {
  std::u32string out;
  out.reserve(text.size() * 2);
  std::size_t i = 0;
  while (i < text.size()) {
    if (!uc::is_decimal_digit(text[i])) {
      out.push_back(text[i++]);
      continue;
    }
    std::size_t end = i;
    while (end < text.size() && uc::is_decimal_digit(text[end])) ++end;
    const std::u32string_view digits(text.data() + i, end - i);

    const bool decimal_head = end + 1 < text.size() && (text[end] == U',' || text[end] == U'.') &&
                              uc::is_decimal_digit(text[end + 1]);
    if (decimal_head) {
      std::size_t frac_end = end + 1;
      while (frac_end < text.size() && uc::is_decimal_digit(text[frac_end])) ++frac_end;
      warnings.push_back("decimal number '" + uc::encode_utf8(text.substr(i, frac_end - i)) +
                         "' verbalized as separate integers");
    }

    const OrdinalSuffix* suffix = end < text.size() ? match_ordinal_suffix(text, end) : nullptr;
    const std::size_t consumed_end = suffix ? end + suffix->text.size() : end;

    std::size_t first_significant = 0;
    while (first_significant + 1 < digits.size() && uc::digit_value(digits[first_significant]) == 0) {
      ++first_significant;
    }
    const std::size_t significant = digits.size() - first_significant;

    if (significant > 6) {
      warnings.push_back("number '" + uc::encode_utf8(digits) + "' outside verbalization range; kept as digits");
      out.append(text, i, consumed_end - i);
      i = consumed_end;
      continue;
    }

    std::uint64_t value = 0;
    for (std::size_t k = first_significant; k < digits.size(); ++k) {
      value = value * 10 + static_cast<std::uint64_t>(uc::digit_value(digits[k]));
    }
    const auto words = verbalize_number_fr(value, suffix ? NumberKind::ordinal : NumberKind::cardinal,
                                           suffix ? suffix->gender : GrammaticalGender::masculine);
    out.push_back(U' ');
    for (const auto& w : words) {
      out += uc::decode_utf8(w);
      out.push_back(U' ');
    }
    i = consumed_end;
  }
  return out;
}

std::u32string space_after_apostrophe(const std::u32string& text) {
  std::u32string out;
  out.reserve(text.size() + 8);
  for (std::size_t i = 0; i < text.size(); ++i) {
    out.push_back(text[i]);
    if (text[i] == kApostrophe && i + 1 < text.size() && !uc::is_space(text[i + 1])) out.push_back(U' ');
  }
  return out;
}

std::u32string split_hyphens(std::u32string text) {
  for (char32_t& c : text) {
    if (is_hyphen(c)) c = U' ';
  }
  return text;
}

std::u32string strip_punctuation(const std::u32string& text) {
  std::u32string out;
  out.reserve(text.size());
  for (char32_t c : text) {
    if (c == kApostrophe) {
      out.push_back(c);
    } else if (is_hyphen(c)) {
      continue;
    } else if (uc::is_punct(c) || uc::is_symbol(c)) {
      out.push_back(U' ');
    } else {
      out.push_back(c);
    }
  }
  return out;
}

std::u32string collapse_whitespace(const std::u32string& text) {
  std::u32string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char32_t c : text) {
    if (uc::is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(U' ');
    pending_space = false;
    out.push_back(c);
  }
  // Deletions upstream can leave a base letter next to a combining mark.
  return uc::nfc(out);
}

}  // namespace

std::string_view to_string(ProfileName p) { return p == ProfileName::basic ? "basic" : "whisper"; }

std::string_view to_string(NormalizationRule r) {
  switch (r) {
    case NormalizationRule::unicode_prenormalize: return "unicode_prenormalize";
    case NormalizationRule::lowercase: return "lowercase";
    case NormalizationRule::remove_bracketed: return "remove_bracketed";
    case NormalizationRule::separate_digits: return "separate_digits";
    case NormalizationRule::verbalize_numbers: return "verbalize_numbers";
    case NormalizationRule::space_after_apostrophe: return "space_after_apostrophe";
    case NormalizationRule::split_hyphens: return "split_hyphens";
    case NormalizationRule::strip_punctuation: return "strip_punctuation";
    case NormalizationRule::collapse_whitespace: return "collapse_whitespace";
  }
  return "?";
}

std::optional<ProfileName> parse_profile_name(std::string_view s) {
  if (s == "basic") return ProfileName::basic;
  if (s == "whisper") return ProfileName::whisper;
  return std::nullopt;
}

NormalizationProfile::NormalizationProfile(ProfileName name, std::vector<NormalizationRule> rules)
    : name_(name), rules_(std::move(rules)) {}

NormalizationProfile NormalizationProfile::whisper() {
  using R = NormalizationRule;
  return {ProfileName::whisper,
          {R::unicode_prenormalize, R::lowercase, R::remove_bracketed, R::strip_punctuation,
           R::collapse_whitespace}};
}

NormalizationProfile NormalizationProfile::basic() {
  using R = NormalizationRule;
  return {ProfileName::basic,
          {R::unicode_prenormalize, R::lowercase, R::remove_bracketed, R::separate_digits, R::verbalize_numbers,
           R::space_after_apostrophe, R::split_hyphens, R::strip_punctuation, R::collapse_whitespace}};
}

NormalizationProfile NormalizationProfile::named(ProfileName name) {
  return name == ProfileName::basic ? basic() : whisper();
}

bool NormalizationProfile::has(NormalizationRule r) const {
  return std::find(rules_.begin(), rules_.end(), r) != rules_.end();
}

std::string NormalizationProfile::fingerprint() const {
  std::string desc = "asreval-normalizer/1:";
  desc += to_string(name_);
  for (auto r : rules_) {
    desc += ',';
    desc += to_string(r);
  }
  return sha256_hex(desc).substr(0, 16);
}

NormalizationResult normalize(std::string_view text, const NormalizationProfile& profile) {
  using R = NormalizationRule;
  NormalizationResult result;
  std::u32string t = uc::decode_utf8(text);
  for (R rule : profile.rules()) {
    switch (rule) {
      case R::unicode_prenormalize: t = prenormalize(t); break;
      case R::lowercase: t = uc::to_lower(t); break;
      case R::remove_bracketed: t = remove_bracketed(t); break;
      case R::separate_digits: t = separate_digits(t); break;
      case R::verbalize_numbers: t = verbalize_numbers(t, result.warnings); break;
      case R::space_after_apostrophe: t = space_after_apostrophe(t); break;
      case R::split_hyphens: t = split_hyphens(std::move(t)); break;
      case R::strip_punctuation: t = strip_punctuation(t); break;
      case R::collapse_whitespace: t = collapse_whitespace(t); break;
    }
  }
  result.text = uc::encode_utf8(t);
  return result;
}

std::string normalize_whisper(std::string_view text) {
  return normalize(text, NormalizationProfile::whisper()).text;
}

std::string normalize_basic(std::string_view text, std::vector<std::string>* warnings) {
  auto result = normalize(text, NormalizationProfile::basic());
  if (warnings) {
    warnings->insert(warnings->end(), result.warnings.begin(), result.warnings.end());
  }
  return std::move(result.text);
}

std::string prenormalize_unicode(std::string_view text) {
  return uc::encode_utf8(prenormalize(uc::decode_utf8(text)));
}

}  // namespace asreval
