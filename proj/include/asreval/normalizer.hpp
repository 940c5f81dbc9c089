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

// Text normalization applied identically to references and hypotheses.
//
// Two profiles exist. *whisper* lowercases, drops ( ) / [ ] spans and
// removes punctuation. *basic* runs the same rules plus the French-specific
// ones: digit/unit separation, number verbalization, a space after every
// apostrophe and hyphen splitting. Rules always run in this order:
//
//   1 unicode_prenormalize     NFC, U+2019 -> ', no-break spaces -> ' '
//   2 lowercase
//   3 remove_bracketed         outermost matched ( ) / [ ] spans, nesting included
//   4 separate_digits          "10km" -> "10 km", ordinal suffixes stay glued
//   5 verbalize_numbers        "10" -> "dix", "1er" -> "premier"
//   6 space_after_apostrophe   "l'école" -> "l' école"
//   7 split_hyphens            "porte-parole" -> "porte parole"
//   8 strip_punctuation        P*/S* -> ' ', hyphens deleted, apostrophe kept
//   9 collapse_whitespace
//
// The apostrophe survives step 8 in both profiles so that basic output is a
// fixed point of the whisper profile.

#ifndef ASREVAL_NORMALIZER_HPP_
#define ASREVAL_NORMALIZER_HPP_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace asreval {

enum class ProfileName { basic, whisper };

enum class NormalizationRule {
  unicode_prenormalize,
  lowercase,
  remove_bracketed,
  separate_digits,
  verbalize_numbers,
  space_after_apostrophe,
  split_hyphens,
  strip_punctuation,
  collapse_whitespace,
};

std::string_view to_string(ProfileName p);
std::string_view to_string(NormalizationRule r);
std::optional<ProfileName> parse_profile_name(std::string_view s);

class NormalizationProfile {
 public:
  static NormalizationProfile whisper();
  static NormalizationProfile basic();
  static NormalizationProfile named(ProfileName name);

  ProfileName name() const { return name_; }
  const std::vector<NormalizationRule>& rules() const { return rules_; }
  bool has(NormalizationRule r) const;

  // Stable digest of the profile name and rule list; recorded next to
  // every normalized stream so both sides can be checked for equality.
  std::string fingerprint() const;

 private:
  NormalizationProfile(ProfileName name, std::vector<NormalizationRule> rules);

  ProfileName name_;
  std::vector<NormalizationRule> rules_;
};

struct NormalizationResult {
  std::string text;
  // Out-of-range numbers and decimals; empty when nothing was flagged.
  std::vector<std::string> warnings;
};

NormalizationResult normalize(std::string_view text, const NormalizationProfile& profile);

std::string normalize_whisper(std::string_view text);
std::string normalize_basic(std::string_view text, std::vector<std::string>* warnings = nullptr);

std::string prenormalize_unicode(std::string_view text);

}  // namespace asreval

#endif  // ASREVAL_NORMALIZER_HPP_
