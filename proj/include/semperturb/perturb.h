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

#ifndef SEMPERTURB_PERTURB_H_
#define SEMPERTURB_PERTURB_H_

#include <optional>
#include <span>
#include <string_view>
#include <utility>

#include "semperturb/neighbors.h"
#include "semperturb/search_space.h"
#include "semperturb/synonyms.h"
#include "semperturb/typo.h"
#include "semperturb/vocab.h"

namespace semperturb {

// Tokens occurring at least `eps` times among the k entries of `index`
// nearest to `query`, plus original_id. Throws kDimensionMismatch.
SearchSpace contextual_candidates(std::span<const double> query,
                                  TokenId original_id,
                                  const ContextualIndex& index, std::size_t k,
                                  std::size_t eps);

enum class TypoMode { kEnglish, kCharacter };

struct PerturbConfig {
  bool typo = false;
  bool knowledge = false;
  bool contextual = false;
  // Every vocabulary token except the unknown token; used for unconstrained
  // reference runs.
  bool full_vocabulary = false;

  TypoMode typo_mode = TypoMode::kEnglish;
  std::size_t k = 700;
  std::size_t eps = 8;
  // Without a per-position query vector, query the index with the token's
  // static embedding row.
  bool static_fallback = true;

  // Throws kNoFunctionEnabled, or kConfig when k < eps or eps < 1.
  void validate() const;
};

// Non-owning view of the loaded resources. Pointers for functions that are
// not enabled may be null.
struct PerturbResources {
  const Vocabulary* vocab = nullptr;
  const TypoRuleSet* typo_rules = nullptr;
  const SynonymKB* synonyms = nullptr;
  const ContextualIndex* index = nullptr;
  const EmbeddingMatrix* static_embeddings = nullptr;
};

// Per-function spaces for one position; a function that is disabled (or a
// contextual lookup that had no query) is left empty.
struct PositionSpaces {
  explicit PositionSpaces(SearchSpace original) : combined(std::move(original)) {}

  std::optional<SearchSpace> typo;
  std::optional<SearchSpace> knowledge;
  std::optional<SearchSpace> contextual;
  std::optional<SearchSpace> full_vocabulary;
  SearchSpace combined;
};

PositionSpaces position_spaces(std::string_view token,
                               std::optional<std::span<const double>> query,
                               const PerturbConfig& config,
                               const PerturbResources& resources);

// Union of the enabled functions' spaces.
SearchSpace combined_space(std::string_view token,
                           std::optional<std::span<const double>> query,
                           const PerturbConfig& config,
                           const PerturbResources& resources);

}  // namespace semperturb

#endif  // SEMPERTURB_PERTURB_H_
