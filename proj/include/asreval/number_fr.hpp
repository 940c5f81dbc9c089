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

// French number words in traditional orthography ("vingt et un",
// "quatre-vingts", "deux cents"), emitted as separate tokens with hyphens
// already split: 99 -> {"quatre", "vingt", "dix", "neuf"}.

#ifndef ASREVAL_NUMBER_FR_HPP_
#define ASREVAL_NUMBER_FR_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace asreval {

enum class NumberKind { cardinal, ordinal };

// Only affects the ordinal of 1: "premier" vs "première".
enum class GrammaticalGender { masculine, feminine };

inline constexpr std::uint64_t kMaxVerbalizedNumber = 999'999;

class UnsupportedRange : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Throws UnsupportedRange for n > kMaxVerbalizedNumber.
std::vector<std::string> verbalize_number_fr(std::uint64_t n, NumberKind kind,
                                             GrammaticalGender gender = GrammaticalGender::masculine);

}  // namespace asreval

#endif  // ASREVAL_NUMBER_FR_HPP_
