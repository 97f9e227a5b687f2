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

#include <map>
#include <numeric>

#include "semperturb/error.h"

namespace semperturb {

SearchSpace contextual_candidates(std::span<const double> query,
                                  TokenId original_id,
                                  const ContextualIndex& index, std::size_t k,
                                  std::size_t eps) {
  // An empty index has no dimension yet; it simply contributes nothing.
  if (index.empty()) return SearchSpace(original_id);
  std::map<TokenId, std::size_t> counts;
  for (const auto& hit : knn_query(index, query, k)) ++counts[hit.token_id];
  std::vector<TokenId> kept;
  for (const auto& [id, count] : counts) {
    if (id != original_id && count >= eps) kept.push_back(id);
  }
  return SearchSpace(original_id, std::move(kept));
}

void PerturbConfig::validate() const {
  if (!typo && !knowledge && !contextual && !full_vocabulary) {
    throw Error(ErrorCode::kNoFunctionEnabled,
                "enable at least one perturbation function");
  }
  if (eps < 1 || k < eps) {
    throw Error(ErrorCode::kConfig, "contextual parameters need k >= eps >= 1");
  }
}

namespace {

template <typename T>
const T& require(const T* resource, const char* what) {
  if (!resource) {
    throw Error(ErrorCode::kConfig, std::string(what) + " not loaded");
  }
  return *resource;
}

}  // namespace

PositionSpaces position_spaces(std::string_view token,
                               std::optional<std::span<const double>> query,
                               const PerturbConfig& config,
                               const PerturbResources& resources) {
  config.validate();
  const Vocabulary& vocab = require(resources.vocab, "vocabulary");
  const auto original = vocab.find(token);
  if (!original || *original == vocab.unk_id()) {
    // Out-of-vocabulary positions are frozen on the unknown token.
    PositionSpaces frozen{SearchSpace(vocab.unk_id())};
    if (config.typo) frozen.typo = frozen.combined;
    if (config.knowledge) frozen.knowledge = frozen.combined;
    if (config.contextual) frozen.contextual = frozen.combined;
    if (config.full_vocabulary) frozen.full_vocabulary = frozen.combined;
    return frozen;
  }

  PositionSpaces out{SearchSpace(*original)};
  if (config.typo) {
    const auto& rules = require(resources.typo_rules, "typo rules");
    out.typo = config.typo_mode == TypoMode::kEnglish
                   ? typo_candidates(token, rules, vocab)
                   : homophone_glyph_candidates(token, rules, vocab);
    out.combined.merge(*out.typo);
  }
  if (config.knowledge) {
    out.knowledge =
        knowledge_candidates(token, require(resources.synonyms, "synonym KB"),
                             vocab);
    out.combined.merge(*out.knowledge);
  }
  if (config.contextual) {
    const auto& index = require(resources.index, "contextual index");
    std::optional<std::span<const double>> q = query;
    if (!q && config.static_fallback && resources.static_embeddings) {
      q = resources.static_embeddings->row(*original);
    }
    if (q) {
      out.contextual =
          contextual_candidates(*q, *original, index, config.k, config.eps);
      out.combined.merge(*out.contextual);
    }
  }
  if (config.full_vocabulary) {
    std::vector<TokenId> all(vocab.size() - 1);
    std::iota(all.begin(), all.end(), TokenId{1});
    out.full_vocabulary = SearchSpace(*original, std::move(all));
    out.combined.merge(*out.full_vocabulary);
  }
  return out;
}

SearchSpace combined_space(std::string_view token,
                           std::optional<std::span<const double>> query,
                           const PerturbConfig& config,
                           const PerturbResources& resources) {
  return position_spaces(token, query, config, resources).combined;
}

}  // namespace semperturb
