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


// Exhaustive edit-script search: walks every alignment path, no dynamic
// programming. Exponential, only for short sequences.

#ifndef ASREVAL_TESTS_ORACLES_EDIT_SCRIPTS_HPP_
#define ASREVAL_TESTS_ORACLES_EDIT_SCRIPTS_HPP_

#include <cstdint>
#include <tuple>
#include <vector>

namespace oracle {

struct Script {
  int cost = 0;
  int subs = 0;
  int ins = 0;
  int dels = 0;
  int matches = 0;
};

template <class T>
void walk(const std::vector<T>& ref, const std::vector<T>& hyp, std::size_t i, std::size_t j, Script cur,
          Script& best, bool& have) {
  if (i == ref.size() && j == hyp.size()) {
    // Lowest cost first, then most substitutions.
    if (!have || std::tuple(cur.cost, -cur.subs) < std::tuple(best.cost, -best.subs)) best = cur;
    have = true;
    return;
  }
  if (i < ref.size() && j < hyp.size()) {
    Script next = cur;
    if (ref[i] == hyp[j]) {
      ++next.matches;
    } else {
      ++next.subs;
      ++next.cost;
    }
    walk(ref, hyp, i + 1, j + 1, next, best, have);
  }
  if (i < ref.size()) {
    Script next = cur;
    ++next.dels;
    ++next.cost;
    walk(ref, hyp, i + 1, j, next, best, have);
  }
  if (j < hyp.size()) {
    Script next = cur;
    ++next.ins;
    ++next.cost;
    walk(ref, hyp, i, j + 1, next, best, have);
  }
}

template <class T>
Script best_script(const std::vector<T>& ref, const std::vector<T>& hyp) {
  Script best;
  bool have = false;
  walk(ref, hyp, 0, 0, Script{}, best, have);
  return best;
}

// Every sequence of length <= max_len over symbols 0..alphabet-1.
inline std::vector<std::vector<int>> all_sequences(int alphabet, int max_len) {
  std::vector<std::vector<int>> out{{}};
  std::vector<std::vector<int>> layer{{}};
  for (int len = 1; len <= max_len; ++len) {
    std::vector<std::vector<int>> next;
    for (const auto& s : layer) {
      for (int a = 0; a < alphabet; ++a) {
        auto t = s;
        t.push_back(a);
        next.push_back(std::move(t));
      }
    }
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

}  // namespace oracle

#endif  // ASREVAL_TESTS_ORACLES_EDIT_SCRIPTS_HPP_
