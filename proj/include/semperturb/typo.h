// Copyright 2026 The semperturb Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SEMPERTURB_TYPO_H_
#define SEMPERTURB_TYPO_H_

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "semperturb/search_space.h"
#include "semperturb/vocab.h"

namespace semperturb {

enum class TypoRule { kInsert, kDelete, kSwap, kSubKeyboard, kSubVisual };

// Character maps are keyed by UTF-8 code point.
using CharTable = std::map<std::string, std::vector<std::string>>;

struct TypoRuleSet {
  CharTable keyboard_neighbors;
  CharTable visual_subs;
  std::set<TypoRule> enabled;
  // Per-character tables for character-level (Chinese) text.
  CharTable homophones;
  CharTable glyphs;
  std::size_t homophone_cap = 5;

  // QWERTY adjacency plus the usual look-alike substitutions (o/0, l/1, ...),
  // all five rules enabled.
  static TypoRuleSet english_default();

  // Throws kMalformedFile on a self-mapping or a zero cap.
  void validate() const;
};

// Line-oriented "key: value" records:
//   preset: english
//   enabled: insert,delete,swap,sub_keyboard,sub_visual
//   homophone_cap: 5
//   keyboard: q = w,a,s
//   visual: o = 0
//   homophone: 什 = 甚,神
//   glyph: 什 = 汁
// '#' starts a comment line.
TypoRuleSet load_typo_rules(const std::filesystem::path& path);
TypoRuleSet parse_typo_rules(const std::vector<std::string>& lines);

// Single-edit typos of `token` that exist in vocab, plus the token itself.
SearchSpace typo_candidates(std::string_view token, const TypoRuleSet& rules,
                            const Vocabulary& vocab);

// Glyph-similar and (capped) same-pronunciation characters in vocab, plus the
// token itself.
SearchSpace homophone_glyph_candidates(std::string_view token,
                                       const TypoRuleSet& rules,
                                       const Vocabulary& vocab);

}  // namespace semperturb

#endif  // SEMPERTURB_TYPO_H_
