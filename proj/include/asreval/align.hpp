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

// Levenshtein alignment with unit costs, reporting substitution, insertion
// and deletion counts.
//
// Among minimum-cost alignments the one with the most substitutions wins
// (a substitution is preferred over an insertion/deletion pair). Because
// I - D = |hyp| - |ref| on every path, cost and S together fix all counts,
// so the result does not depend on any further tie-breaking and swapping
// ref and hyp swaps I and D while keeping S.
//
// Only two DP rows are kept; counts ride along with the cost, so no
// backtrace matrix is needed.

#ifndef ASREVAL_ALIGN_HPP_
#define ASREVAL_ALIGN_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace asreval {

enum class Unit { word, character };

struct AlignmentResult {
  Unit unit = Unit::word;
  std::uint64_t n_ref = 0;
  std::uint64_t substitutions = 0;
  std::uint64_t insertions = 0;
  std::uint64_t deletions = 0;
  std::uint64_t correct = 0;

  std::uint64_t errors() const { return substitutions + insertions + deletions; }

  // Percent; empty when n_ref == 0.
  std::optional<double> error_rate_pct() const {
    if (n_ref == 0) return std::nullopt;
    return 100.0 * static_cast<double>(errors()) / static_cast<double>(n_ref);
  }

  friend bool operator==(const AlignmentResult&, const AlignmentResult&) = default;
};

namespace detail {

struct AlignCell {
  std::uint64_t cost = 0;
  std::uint64_t subs = 0;
  std::uint64_t ins = 0;
  std::uint64_t del = 0;
};

inline bool better(const AlignCell& a, const AlignCell& b) {
  return a.cost < b.cost || (a.cost == b.cost && a.subs > b.subs);
}

}  // namespace detail

template <class Token>
AlignmentResult align(std::span<const Token> ref, std::span<const Token> hyp, Unit unit = Unit::word) {
  using detail::AlignCell;
  const std::size_t m = hyp.size();
  std::vector<AlignCell> prev(m + 1), cur(m + 1);
  for (std::size_t j = 0; j <= m; ++j) prev[j] = {j, 0, j, 0};

  for (std::size_t i = 1; i <= ref.size(); ++i) {
    cur[0] = {i, 0, 0, i};
    for (std::size_t j = 1; j <= m; ++j) {
      // Candidates in preference order: diagonal, deletion, insertion.
      // A later candidate only wins when strictly better.
      AlignCell best = prev[j - 1];
      if (!(ref[i - 1] == hyp[j - 1])) {
        best.cost += 1;
        best.subs += 1;
      }
      AlignCell del = prev[j];
      del.cost += 1;
      del.del += 1;
      if (detail::better(del, best)) best = del;
      AlignCell ins = cur[j - 1];
      ins.cost += 1;
      ins.ins += 1;
      if (detail::better(ins, best)) best = ins;
      cur[j] = best;
    }
    std::swap(prev, cur);
  }

  const AlignCell& end = prev[m];
  AlignmentResult r;
  r.unit = unit;
  r.n_ref = ref.size();
  r.substitutions = end.subs;
  r.insertions = end.ins;
  r.deletions = end.del;
  r.correct = r.n_ref - end.subs - end.del;
  return r;
}

template <class Token>
AlignmentResult align(const std::vector<Token>& ref, const std::vector<Token>& hyp, Unit unit = Unit::word) {
  return align(std::span<const Token>(ref), std::span<const Token>(hyp), unit);
}

// Splits on runs of whitespace.
std::vector<std::string> word_tokens(std::string_view text);

// One token per Unicode scalar value; inter-word spaces are tokens too.
std::vector<std::string> char_tokens(std::string_view text);

AlignmentResult align_words(std::string_view ref_text, std::string_view hyp_text);
AlignmentResult align_chars(std::string_view ref_text, std::string_view hyp_text);

}  // namespace asreval

#endif  // ASREVAL_ALIGN_HPP_
