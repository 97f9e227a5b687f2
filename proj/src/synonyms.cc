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

#include "semperturb/synonyms.h"

#include <algorithm>

#include "semperturb/error.h"
#include "semperturb/text_util.h"

namespace semperturb {

const std::set<std::string>& SynonymKB::default_tags() {
  static const std::set<std::string> tags = {"NOUN", "VERB", "ADJ", "ADV"};
  return tags;
}

void SynonymKB::add_synset(const std::string& lemma, Synset synset) {
  Synset unique;
  for (auto& syn : synset) {
    if (!tags_.count(syn.pos)) {
      throw Error(ErrorCode::kMalformedFile,
                  "undeclared pos tag '" + syn.pos + "' for lemma '" + lemma +
                      "'");
    }
    if (std::find(unique.begin(), unique.end(), syn) == unique.end()) {
      unique.push_back(std::move(syn));
    }
  }
  entries_[lemma].push_back(std::move(unique));
}

const std::vector<Synset>* SynonymKB::synsets(std::string_view lemma) const {
  auto it = entries_.find(lemma);
  return it == entries_.end() ? nullptr : &it->second;
}

SynonymKB parse_synonym_kb(const std::vector<std::string>& lines) {
  std::size_t first = 0;
  std::set<std::string> tags = SynonymKB::default_tags();
  if (!lines.empty() && lines[0].rfind("#tags", 0) == 0) {
    tags.clear();
    const auto parts = split(lines[0], '\t');
    if (parts.size() != 2) {
      throw Error(ErrorCode::kMalformedFile, "synonym KB: bad #tags line");
    }
    for (const auto& t : split(parts[1], ',')) {
      if (!trim(t).empty()) tags.emplace(trim(t));
    }
    first = 1;
  }
  SynonymKB kb(std::move(tags));
  for (std::size_t n = first; n < lines.size(); ++n) {
    const std::string_view line = lines[n];
    if (trim(line).empty() || line.front() == '#') continue;
    const auto where = "synonym KB line " + std::to_string(n + 1);
    const auto fields = split(line, '\t');
    if (fields.size() != 2 || trim(fields[0]).empty()) {
      throw Error(ErrorCode::kMalformedFile, where + ": expected lemma<TAB>synsets");
    }
    const std::string lemma = to_lower_ascii(trim(fields[0]));
    for (const auto& group : split(fields[1], '|')) {
      const auto colon = group.find(':');
      if (colon == std::string::npos) {
        throw Error(ErrorCode::kMalformedFile, where + ": synset without pos");
      }
      const std::string pos(trim(std::string_view(group).substr(0, colon)));
      Synset synset;
      for (const auto& syn : split(std::string_view(group).substr(colon + 1), ',')) {
        const auto t = trim(syn);
        if (!t.empty()) synset.push_back({to_lower_ascii(t), pos});
      }
      kb.add_synset(lemma, std::move(synset));
    }
  }
  return kb;
}

SynonymKB load_synonym_kb(const std::filesystem::path& path) {
  return parse_synonym_kb(read_lines(path));
}

SearchSpace knowledge_candidates(std::string_view token, const SynonymKB& kb,
                                 const Vocabulary& vocab) {
  const auto original = vocab.find(token);
  if (!original) return SearchSpace(vocab.unk_id());
  const auto* synsets = kb.synsets(to_lower_ascii(token));
  if (!synsets) return SearchSpace(*original);

  // The lemma itself is excluded from the pos tally; it is re-added as the
  // identity candidate.
  std::map<std::string, std::size_t> pos_count;
  for (const auto& synset : *synsets) {
    for (const auto& syn : synset) {
      if (syn.token != token) ++pos_count[syn.pos];
    }
  }
  std::size_t modal = 0;
  for (const auto& [pos, count] : pos_count) modal = std::max(modal, count);

  std::vector<TokenId> found;
  for (const auto& synset : *synsets) {
    for (const auto& syn : synset) {
      if (syn.token == token || pos_count[syn.pos] != modal) continue;
      if (auto id = vocab.find(syn.token)) found.push_back(*id);
    }
  }
  return SearchSpace(*original, std::move(found));
}

}  // namespace semperturb
