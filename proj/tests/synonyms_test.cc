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

#include <gtest/gtest.h>

#include <map>
#include <random>

#include "test_util.h"

namespace semperturb {
namespace {

using testing::error_code_of;

std::vector<TokenId> ids_of(const Vocabulary& v, std::initializer_list<const char*> tokens) {
  std::vector<TokenId> out;
  for (const char* t : tokens) out.push_back(*v.find(t));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<TokenId> as_vector(const SearchSpace& s) {
  return {s.candidate_ids().begin(), s.candidate_ids().end()};
}

TEST(KnowledgeCandidatesTest, KeepsModalPartOfSpeech) {
  const auto vocab = Vocabulary::from_tokens(
      {"<unk>", "use", "exploitation", "practice", "apply", "employ"});
  const auto kb = parse_synonym_kb({"use\tNOUN:exploitation|VERB:practice,apply,employ"});
  const auto s = knowledge_candidates("use", kb, vocab);
  EXPECT_EQ(as_vector(s), ids_of(vocab, {"use", "practice", "apply", "employ"}));
}

TEST(KnowledgeCandidatesTest, NoEntryGivesSingleton) {
  const auto vocab = Vocabulary::from_tokens({"<unk>", "use", "x"});
  const auto kb = parse_synonym_kb({"x\tNOUN:use"});
  EXPECT_TRUE(knowledge_candidates("use", kb, vocab).is_singleton());
}

TEST(KnowledgeCandidatesTest, TiedGroupsAreAllKept) {
  const auto vocab = Vocabulary::from_tokens({"<unk>", "w", "a", "b"});
  const auto kb = parse_synonym_kb({"w\tNOUN:a|VERB:b"});
  EXPECT_EQ(as_vector(knowledge_candidates("w", kb, vocab)), ids_of(vocab, {"w", "a", "b"}));
}

TEST(KnowledgeCandidatesTest, MultiwordSynonymsAreDropped) {
  const auto vocab = Vocabulary::from_tokens({"<unk>", "last", "endure"});
  const auto kb = parse_synonym_kb({"last\tVERB:last out,endure"});
  EXPECT_EQ(as_vector(knowledge_candidates("last", kb, vocab)), ids_of(vocab, {"last", "endure"}));
}

TEST(KnowledgeCandidatesTest, LookupIsCaseInsensitive) {
  const auto vocab = Vocabulary::from_tokens({"<unk>", "big", "large"});
  const auto kb = parse_synonym_kb({"Big\tADJ:Large"});
  EXPECT_EQ(knowledge_candidates("big", kb, vocab).size(), 2u);
}

TEST(KnowledgeCandidatesTest, NothingBelowTheModalCount) {
  std::mt19937_64 rng(5);
  const std::vector<std::string> tags = {"NOUN", "VERB", "ADJ", "ADV"};
  std::vector<std::string> tokens = {"<unk>", "w"};
  for (int i = 0; i < 30; ++i) tokens.push_back("s" + std::to_string(i));
  const auto vocab = Vocabulary::from_tokens(tokens);
  for (int trial = 0; trial < 200; ++trial) {
    SynonymKB kb;
    std::map<std::string, std::string> pos_of;
    const int groups = 1 + static_cast<int>(rng() % 4);
    for (int g = 0; g < groups; ++g) {
      const auto& tag = tags[rng() % tags.size()];
      Synset synset;
      const int n = 1 + static_cast<int>(rng() % 4);
      for (int i = 0; i < n; ++i) {
        const std::string tok = "s" + std::to_string(rng() % 30);
        if (pos_of.count(tok)) continue;
        pos_of[tok] = tag;
        synset.push_back({tok, tag});
      }
      kb.add_synset("w", synset);
    }
    std::map<std::string, int> counts;
    for (const auto& [tok, tag] : pos_of) ++counts[tag];
    int modal = 0;
    for (const auto& [tag, c] : counts) modal = std::max(modal, c);
    const auto s = knowledge_candidates("w", kb, vocab);
    for (TokenId id : s.candidate_ids()) {
      if (id == s.original_id()) continue;
      EXPECT_EQ(counts[pos_of[vocab.token(id)]], modal);
    }
  }
}

TEST(SynonymKBTest, DeclaredTagSetIsEnforced) {
  EXPECT_EQ(error_code_of([] { parse_synonym_kb({"w\tPRON:x"}); }), ErrorCode::kMalformedFile);
  EXPECT_NO_THROW(parse_synonym_kb({"#tags\tPRON", "w\tPRON:x"}));
}

TEST(SynonymKBTest, DuplicatePairsCollapse) {
  const auto kb = parse_synonym_kb({"w\tNOUN:x,x,y"});
  ASSERT_NE(kb.synsets("w"), nullptr);
  EXPECT_EQ(kb.synsets("w")->front().size(), 2u);
}

TEST(SynonymKBTest, MissingPosIsMalformed) {
  EXPECT_EQ(error_code_of([] { parse_synonym_kb({"w\tx,y"}); }), ErrorCode::kMalformedFile);
}

}  // namespace
}  // namespace semperturb
