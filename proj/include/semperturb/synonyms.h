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

#ifndef SEMPERTURB_SYNONYMS_H_
#define SEMPERTURB_SYNONYMS_H_

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "semperturb/search_space.h"
#include "semperturb/vocab.h"

namespace semperturb {

struct Synonym {
  std::string token;
  std::string pos;
  bool operator==(const Synonym&) const = default;
};

using Synset = std::vector<Synonym>;

// Lemma -> synsets. Only synonym sets are stored; there is no hypernym or
// hyponym expansion.
class SynonymKB {
 public:
  static const std::set<std::string>& default_tags();

  explicit SynonymKB(std::set<std::string> tags = default_tags())
      : tags_(std::move(tags)) {}

  // Throws kMalformedFile on an undeclared pos tag. Duplicate (token, pos)
  // pairs inside the synset are collapsed.
  void add_synset(const std::string& lemma, Synset synset);

  const std::vector<Synset>* synsets(std::string_view lemma) const;
  const std::set<std::string>& tags() const { return tags_; }
  std::size_t size() const { return entries_.size(); }

 private:
  std::set<std::string> tags_;
  std::map<std::string, std::vector<Synset>, std::less<>> entries_;
};

// One record per line: "<lemma>\t<pos>:<syn1>,<syn2>|<pos>:<syn3>". An
// optional first line "#tags\tNOUN,VERB,..." replaces the default tag set
// (NOUN, VERB, ADJ, ADV). Lemmas are lowercased.
SynonymKB load_synonym_kb(const std::filesystem::path& path);
SynonymKB parse_synonym_kb(const std::vector<std::string>& lines);

// Synonyms sharing the most frequent pos tag of the token's synsets (all tied
// tags are kept) that are single vocabulary tokens, plus the token itself.
SearchSpace knowledge_candidates(std::string_view token, const SynonymKB& kb,
                                 const Vocabulary& vocab);

}  // namespace semperturb

#endif  // SEMPERTURB_SYNONYMS_H_
