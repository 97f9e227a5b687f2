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

#include "semperturb/perturb.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>

#include "test_util.h"

namespace semperturb {
namespace {

using testing::error_code_of;

std::vector<TokenId> as_vector(const SearchSpace& s) {
  return {s.candidate_ids().begin(), s.candidate_ids().end()};
}

// ids: 1 original, 2 P, 3 Q, 4 R, 5 far decoy.
ContextualIndex pqr_index() {
  ContextualIndex index(1);
  double x = 0.0;
  auto add = [&](TokenId id, int n) {
    for (int i = 0; i < n; ++i) index.add(id, std::vector<double>{x += 0.01});
  };
  add(2, 4);
  add(3, 5);
  add(2, 6);
  add(4, 2);
  for (int i = 0; i < 10; ++i) index.add(5, std::vector<double>{100.0 + i});
  return index;
}

TEST(ContextualCandidatesTest, CountsAmongNearest) {
  const auto s = contextual_candidates(std::vector<double>{0.0}, 1, pqr_index(), 17, 5);
  EXPECT_EQ(as_vector(s), (std::vector<TokenId>{1, 2, 3}));
}

TEST(ContextualCandidatesTest, HighThresholdLeavesOriginal) {
  const auto s = contextual_candidates(std::vector<double>{0.0}, 1, pqr_index(), 17, 11);
  EXPECT_TRUE(s.is_singleton());
  EXPECT_EQ(s.original_id(), 1u);
}

TEST(ContextualCandidatesTest, EmptyIndexGivesSingleton) {
  const auto s = contextual_candidates(std::vector<double>{0.0, 1.0}, 4, ContextualIndex(), 700, 8);
  EXPECT_TRUE(s.is_singleton());
}

TEST(ContextualCandidatesTest, AgreesWithSortAndCount) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t dim = 1 + rng() % 4;
    const std::size_t n = 1 + rng() % 1000;
    const std::size_t tokens = 2 + rng() % 40;
    ContextualIndex index(dim);
    std::vector<double> v(dim);
    for (std::size_t e = 0; e < n; ++e) {
      for (auto& x : v) x = std::round(normal(rng) * 4.0) / 4.0;
      index.add(static_cast<TokenId>(rng() % tokens), v);
    }
    std::vector<double> q(dim);
    for (auto& x : q) x = normal(rng);
    const std::size_t eps = 1 + rng() % 10;
    const std::size_t k = eps + rng() % 100;
    const auto original = static_cast<TokenId>(rng() % tokens);

    std::vector<std::pair<double, std::size_t>> order;
    for (std::size_t e = 0; e < n; ++e) {
      double d = 0;
      for (std::size_t j = 0; j < dim; ++j) {
        const double diff = q[j] - index.vector(e)[j];
        d += diff * diff;
      }
      order.emplace_back(d, e);
    }
    std::sort(order.begin(), order.end());
    std::map<TokenId, std::size_t> counts;
    for (std::size_t i = 0; i < std::min(k, n); ++i) ++counts[index.token_id(order[i].second)];
    std::vector<TokenId> expected = {original};
    for (const auto& [id, c] : counts) {
      if (c >= eps && id != original) expected.push_back(id);
    }
    std::sort(expected.begin(), expected.end());

    const auto s = contextual_candidates(q, original, index, k, eps);
    ASSERT_EQ(as_vector(s), expected) << "trial " << trial;
  }
}

TEST(PerturbConfigTest, DefaultThresholdsAreAccepted) {
  PerturbConfig cfg;
  cfg.contextual = true;
  EXPECT_EQ(cfg.k, 700u);
  EXPECT_EQ(cfg.eps, 8u);
  EXPECT_NO_THROW(cfg.validate());
}

TEST(PerturbConfigTest, RejectsBadThresholds) {
  PerturbConfig cfg;
  cfg.contextual = true;
  cfg.k = 4;
  cfg.eps = 5;
  EXPECT_EQ(error_code_of([&] { cfg.validate(); }), ErrorCode::kConfig);
  cfg.k = 5;
  cfg.eps = 0;
  EXPECT_EQ(error_code_of([&] { cfg.validate(); }), ErrorCode::kConfig);
}

TEST(PerturbConfigTest, NeedsAFunction) {
  EXPECT_EQ(error_code_of([] { PerturbConfig().validate(); }), ErrorCode::kNoFunctionEnabled);
}

// Vocabulary x, a, b, c with each function reaching exactly one of a, b, c.
struct SmallWorld {
  Vocabulary vocab = Vocabulary::from_tokens({"<unk>", "x", "a", "b", "c"});
  TypoRuleSet typo;
  SynonymKB kb;
  ContextualIndex index{1};

  SmallWorld() {
    typo.keyboard_neighbors = {{"x", {"a"}}};
    typo.enabled = {TypoRule::kSubKeyboard};
    kb.add_synset("x", {{"b", "NOUN"}});
    for (int i = 0; i < 3; ++i) index.add(4, std::vector<double>{0.1 * i});
  }

  PerturbResources resources() const {
    PerturbResources r;
    r.vocab = &vocab;
    r.typo_rules = &typo;
    r.synonyms = &kb;
    r.index = &index;
    return r;
  }
};

TEST(CombinedSpaceTest, UnionOfFunctions) {
  SmallWorld w;
  PerturbConfig cfg{.typo = true, .knowledge = true, .contextual = true};
  cfg.k = 3;
  cfg.eps = 2;
  const std::vector<double> q = {0.0};
  const auto ps = position_spaces("x", q, cfg, w.resources());
  EXPECT_EQ(as_vector(*ps.typo), (std::vector<TokenId>{1, 2}));
  EXPECT_EQ(as_vector(*ps.knowledge), (std::vector<TokenId>{1, 3}));
  EXPECT_EQ(as_vector(*ps.contextual), (std::vector<TokenId>{1, 4}));
  EXPECT_EQ(as_vector(ps.combined), (std::vector<TokenId>{1, 2, 3, 4}));
  EXPECT_EQ(combined_space("x", q, cfg, w.resources()), ps.combined);
}

TEST(CombinedSpaceTest, AllSingletons) {
  SmallWorld w;
  PerturbConfig cfg{.typo = true, .knowledge = true, .contextual = true};
  cfg.k = 3;
  cfg.eps = 2;
  const auto s = combined_space("c", std::vector<double>{50.0}, cfg, w.resources());
  EXPECT_TRUE(s.is_singleton());
  EXPECT_EQ(s.original_id(), 4u);
}

TEST(CombinedSpaceTest, ContextualSkippedWithoutQuery) {
  SmallWorld w;
  PerturbConfig cfg{.contextual = true};
  cfg.k = 3;
  cfg.eps = 2;
  const auto ps = position_spaces("x", std::nullopt, cfg, w.resources());
  EXPECT_FALSE(ps.contextual.has_value());
  EXPECT_TRUE(ps.combined.is_singleton());
}

TEST(CombinedSpaceTest, StaticRowFallback) {
  SmallWorld w;
  RowMatrix rows = RowMatrix::Constant(5, 1, 40.0);
  rows(1, 0) = 0.05;
  const EmbeddingMatrix statics(rows);
  auto res = w.resources();
  res.static_embeddings = &statics;
  PerturbConfig cfg{.contextual = true};
  cfg.k = 3;
  cfg.eps = 2;
  EXPECT_EQ(combined_space("x", std::nullopt, cfg, res).size(), 2u);
  cfg.static_fallback = false;
  EXPECT_TRUE(combined_space("x", std::nullopt, cfg, res).is_singleton());
}

TEST(CombinedSpaceTest, UnknownTokenIsFrozen) {
  SmallWorld w;
  PerturbConfig cfg{.typo = true, .full_vocabulary = true};
  const auto s = combined_space("zzz", std::nullopt, cfg, w.resources());
  EXPECT_TRUE(s.is_singleton());
  EXPECT_EQ(s.original_id(), 0u);
}

TEST(CombinedSpaceTest, FullVocabularyExcludesUnknown) {
  SmallWorld w;
  PerturbConfig cfg{.full_vocabulary = true};
  EXPECT_EQ(as_vector(combined_space("a", std::nullopt, cfg, w.resources())),
            (std::vector<TokenId>{1, 2, 3, 4}));
}

TEST(CombinedSpaceTest, MissingResourceIsConfigError) {
  SmallWorld w;
  auto res = w.resources();
  res.synonyms = nullptr;
  PerturbConfig cfg{.knowledge = true};
  EXPECT_EQ(error_code_of([&] { combined_space("x", std::nullopt, cfg, res); }),
            ErrorCode::kConfig);
}

TEST(CombinedSpaceTest, SupersetOfEachFunctionOnRandomResources) {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> normal;
  std::vector<std::string> tokens = {"<unk>"};
  const std::string letters = "abcde";
  for (char a : letters) {
    for (char b : letters) tokens.push_back(std::string{a, b});
  }
  const auto vocab = Vocabulary::from_tokens(tokens);
  for (int trial = 0; trial < 50; ++trial) {
    TypoRuleSet typo;
    typo.enabled = {TypoRule::kSubKeyboard, TypoRule::kSwap, TypoRule::kDelete};
    for (char a : letters) {
      typo.keyboard_neighbors[std::string(1, a)] = {std::string(1, letters[rng() % 5])};
      if (typo.keyboard_neighbors[std::string(1, a)][0][0] == a) {
        typo.keyboard_neighbors.erase(std::string(1, a));
      }
    }
    SynonymKB kb;
    for (std::size_t t = 1; t < tokens.size(); ++t) {
      kb.add_synset(tokens[t], {{tokens[1 + rng() % 25], rng() % 2 ? "NOUN" : "VERB"}});
    }
    ContextualIndex index(2);
    for (int e = 0; e < 200; ++e) {
      index.add(static_cast<TokenId>(1 + rng() % 25), std::vector<double>{normal(rng), normal(rng)});
    }
    PerturbResources res{&vocab, &typo, &kb, &index, nullptr};
    PerturbConfig cfg{.typo = true, .knowledge = true, .contextual = true};
    cfg.k = 30;
    cfg.eps = 3;
    for (std::size_t t = 1; t < tokens.size(); ++t) {
      const std::vector<double> q = {normal(rng), normal(rng)};
      const auto ps = position_spaces(tokens[t], q, cfg, res);
      EXPECT_TRUE(ps.combined.contains(static_cast<TokenId>(t)));
      for (const auto* part : {&*ps.typo, &*ps.knowledge, &*ps.contextual}) {
        for (TokenId id : part->candidate_ids()) EXPECT_TRUE(ps.combined.contains(id));
      }
      ps.combined.validate(vocab.size());
    }
  }
}

TEST(SearchSpaceTest, OriginalAlwaysIncludedAndSorted) {
  const SearchSpace s(5, {9, 2, 9, 7});
  EXPECT_EQ(as_vector(s), (std::vector<TokenId>{2, 5, 7, 9}));
  EXPECT_EQ(s.original_id(), 5u);
}

TEST(SearchSpaceTest, ValidateRejectsOutOfRange) {
  const SearchSpace s(1, {12});
  EXPECT_EQ(error_code_of([&] { s.validate(10); }), ErrorCode::kIdOutOfRange);
}

}  // namespace
}  // namespace semperturb
