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

#include "semperturb/typo.h"

#include <algorithm>

#include "semperturb/error.h"
#include "semperturb/text_util.h"

namespace semperturb {
namespace {

const std::map<std::string, TypoRule, std::less<>>& rule_names() {
  static const std::map<std::string, TypoRule, std::less<>> names = {
      {"insert", TypoRule::kInsert},
      {"delete", TypoRule::kDelete},
      {"swap", TypoRule::kSwap},
      {"sub_keyboard", TypoRule::kSubKeyboard},
      {"sub_visual", TypoRule::kSubVisual},
  };
  return names;
}

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) out += p;
  return out;
}

void add_if_known(const std::string& candidate, const Vocabulary& vocab,
                  std::vector<TokenId>& out) {
  if (auto id = vocab.find(candidate)) out.push_back(*id);
}

const std::vector<std::string>* lookup(const CharTable& table,
                                       const std::string& key) {
  auto it = table.find(key);
  return it == table.end() ? nullptr : &it->second;
}

void append_unique(std::vector<std::string>& list, std::string value) {
  if (std::find(list.begin(), list.end(), value) == list.end()) {
    list.push_back(std::move(value));
  }
}

}  // namespace

TypoRuleSet TypoRuleSet::english_default() {
  TypoRuleSet rules;
  const std::vector<std::string> rows = {"qwertyuiop", "asdfghjkl", "zxcvbnm"};
  auto at = [&rows](int r, int c) -> char {
    if (r < 0 || r >= static_cast<int>(rows.size())) return 0;
    if (c < 0 || c >= static_cast<int>(rows[r].size())) return 0;
    return rows[r][c];
  };
  for (int r = 0; r < static_cast<int>(rows.size()); ++r) {
    for (int c = 0; c < static_cast<int>(rows[r].size()); ++c) {
      auto& list = rules.keyboard_neighbors[std::string(1, rows[r][c])];
      // Same row left/right, then the two keys touching from each
      // neighbouring row on a staggered layout.
      for (auto [dr, dc] : {std::pair{0, -1}, {0, 1}, {-1, 0}, {-1, 1},
                            {1, -1}, {1, 0}}) {
        if (char n = at(r + dr, c + dc)) list.emplace_back(1, n);
      }
    }
  }
  rules.visual_subs = {{"o", {"0"}}, {"0", {"o"}}, {"l", {"1"}},
                       {"1", {"l"}}, {"i", {"1"}}, {"a", {"@"}},
                       {"s", {"$"}}, {"e", {"3"}}};
  rules.enabled = {TypoRule::kInsert, TypoRule::kDelete, TypoRule::kSwap,
                   TypoRule::kSubKeyboard, TypoRule::kSubVisual};
  return rules;
}

void TypoRuleSet::validate() const {
  if (homophone_cap == 0) {
    throw Error(ErrorCode::kMalformedFile, "homophone_cap must be positive");
  }
  for (const CharTable* table :
       {&keyboard_neighbors, &visual_subs, &homophones, &glyphs}) {
    for (const auto& [from, tos] : *table) {
      for (const auto& to : tos) {
        if (to == from) {
          throw Error(ErrorCode::kMalformedFile,
                      "substitution maps '" + from + "' to itself");
        }
      }
    }
  }
}

TypoRuleSet parse_typo_rules(const std::vector<std::string>& lines) {
  TypoRuleSet rules;
  bool enabled_seen = false;
  for (std::size_t n = 0; n < lines.size(); ++n) {
    const std::string_view line = trim(lines[n]);
    if (line.empty() || line.front() == '#') continue;
    const auto where = "typo rules line " + std::to_string(n + 1);
    const auto colon = line.find(':');
    if (colon == std::string_view::npos) {
      throw Error(ErrorCode::kMalformedFile, where + ": expected 'key: value'");
    }
    const std::string key(trim(line.substr(0, colon)));
    const std::string_view value = trim(line.substr(colon + 1));
    if (key == "preset") {
      if (value != "english") {
        throw Error(ErrorCode::kMalformedFile,
                    where + ": unknown preset '" + std::string(value) + "'");
      }
      auto preset = TypoRuleSet::english_default();
      rules.keyboard_neighbors = preset.keyboard_neighbors;
      rules.visual_subs = preset.visual_subs;
      if (!enabled_seen) rules.enabled = preset.enabled;
    } else if (key == "enabled") {
      enabled_seen = true;
      rules.enabled.clear();
      for (const auto& name : split(value, ',')) {
        const auto t = trim(name);
        if (t.empty()) continue;
        auto it = rule_names().find(t);
        if (it == rule_names().end()) {
          throw Error(ErrorCode::kMalformedFile,
                      where + ": unknown rule '" + std::string(t) + "'");
        }
        rules.enabled.insert(it->second);
      }
    } else if (key == "homophone_cap") {
      const auto cap = parse_int(value, where);
      if (cap < 1) {
        throw Error(ErrorCode::kMalformedFile, where + ": cap must be >= 1");
      }
      rules.homophone_cap = static_cast<std::size_t>(cap);
    } else if (key == "keyboard" || key == "visual" || key == "homophone" ||
               key == "glyph") {
      const auto eq = value.find('=');
      if (eq == std::string_view::npos) {
        throw Error(ErrorCode::kMalformedFile, where + ": expected 'x = a,b'");
      }
      const std::string from(trim(value.substr(0, eq)));
      if (from.empty()) {
        throw Error(ErrorCode::kMalformedFile, where + ": empty key");
      }
      CharTable& table = key == "keyboard"    ? rules.keyboard_neighbors
                         : key == "visual"    ? rules.visual_subs
                         : key == "homophone" ? rules.homophones
                                              : rules.glyphs;
      auto& list = table[from];
      for (const auto& to : split(value.substr(eq + 1), ',')) {
        const auto t = trim(to);
        if (!t.empty()) append_unique(list, std::string(t));
      }
    } else {
      throw Error(ErrorCode::kMalformedFile,
                  where + ": unknown key '" + key + "'");
    }
  }
  rules.validate();
  return rules;
}

TypoRuleSet load_typo_rules(const std::filesystem::path& path) {
  return parse_typo_rules(read_lines(path));
}

SearchSpace typo_candidates(std::string_view token, const TypoRuleSet& rules,
                            const Vocabulary& vocab) {
  const auto original = vocab.find(token);
  if (!original) return SearchSpace(vocab.unk_id());

  const auto chars = utf8_code_points(token);
  const std::size_t n = chars.size();
  auto on = [&rules](TypoRule r) { return rules.enabled.count(r) > 0; };
  std::vector<TokenId> found;

  for (std::size_t i = 0; i < n; ++i) {
    if (on(TypoRule::kDelete) && n > 1) {
      auto edited = chars;
      edited.erase(edited.begin() + static_cast<long>(i));
      add_if_known(join(edited), vocab, found);
    }
    if (on(TypoRule::kSwap) && i + 1 < n && chars[i] != chars[i + 1]) {
      auto edited = chars;
      std::swap(edited[i], edited[i + 1]);
      add_if_known(join(edited), vocab, found);
    }
    const auto* neighbors = lookup(rules.keyboard_neighbors, chars[i]);
    if (neighbors && on(TypoRule::kInsert)) {
      // The neighbour key is typed right after the intended one.
      for (const auto& nb : *neighbors) {
        auto edited = chars;
        edited.insert(edited.begin() + static_cast<long>(i) + 1, nb);
        add_if_known(join(edited), vocab, found);
      }
    }
    if (neighbors && on(TypoRule::kSubKeyboard)) {
      for (const auto& nb : *neighbors) {
        auto edited = chars;
        edited[i] = nb;
        add_if_known(join(edited), vocab, found);
      }
    }
    const auto* visual = lookup(rules.visual_subs, chars[i]);
    if (visual && on(TypoRule::kSubVisual)) {
      for (const auto& sub : *visual) {
        auto edited = chars;
        edited[i] = sub;
        add_if_known(join(edited), vocab, found);
      }
    }
  }
  return SearchSpace(*original, std::move(found));
}

SearchSpace homophone_glyph_candidates(std::string_view token,
                                       const TypoRuleSet& rules,
                                       const Vocabulary& vocab) {
  const auto original = vocab.find(token);
  if (!original) return SearchSpace(vocab.unk_id());
  const std::string key(token);
  std::vector<TokenId> found;
  if (const auto* glyphs = lookup(rules.glyphs, key)) {
    for (const auto& g : *glyphs) add_if_known(g, vocab, found);
  }
  if (const auto* homophones = lookup(rules.homophones, key)) {
    const std::size_t keep = std::min(rules.homophone_cap, homophones->size());
    for (std::size_t i = 0; i < keep; ++i) {
      add_if_known((*homophones)[i], vocab, found);
    }
  }
  return SearchSpace(*original, std::move(found));
}

}  // namespace semperturb
