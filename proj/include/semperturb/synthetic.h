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

#ifndef SEMPERTURB_SYNTHETIC_H_
#define SEMPERTURB_SYNTHETIC_H_

#include <cstdint>
#include <filesystem>

#include "semperturb/corpus.h"
#include "semperturb/neighbors.h"
#include "semperturb/synonyms.h"
#include "semperturb/typo.h"
#include "semperturb/vocab.h"

namespace semperturb {

// A keyword-separable two-class corpus with matching perturbation resources.
//
// Every sentence holds exactly one class keyword among neutral fillers. The
// keywords come in cross-class pairs split into three groups, and each group
// is reachable through exactly one perturbation function:
//   typo group:       "ta<i>" <-> "tb<i>"  (look-alike substitution a <-> b)
//   knowledge group:  "kc<i>" <-> "kd<i>"  (ADJ synonyms, NOUN decoys)
//   contextual group: "ce<i>" <-> "cf<i>"  (shared cluster in the index)
// Fillers are "f<nnn>". Class 0 uses ta/kc/ce keywords, class 1 tb/kd/cf.
struct SyntheticOptions {
  std::size_t sentences = 200;
  std::size_t vocab_size = 500;
  std::size_t min_length = 4;
  std::size_t max_length = 8;
  std::size_t typo_pairs = 7;
  std::size_t knowledge_pairs = 7;
  std::size_t contextual_pairs = 6;
  std::size_t context_dim = 8;
  std::size_t cluster_size = 7;  // index entries per contextual keyword
  std::uint64_t seed = 1111;
};

struct SyntheticWorld {
  Vocabulary vocab;
  Corpus corpus;
  TypoRuleSet typo_rules;
  SynonymKB synonyms;
  ContextualIndex index;
  SideVectors side_vectors;  // only at contextual-group keyword positions
  std::size_t k = 20;
  std::size_t eps = 5;
};

SyntheticWorld make_synthetic_world(const SyntheticOptions& options);

// Writes vocab.txt, corpus.tsv, typo_rules.txt, synonyms.tsv, index.txt and
// side_vectors.txt into dir.
void write_synthetic_world(const SyntheticWorld& world,
                           const std::filesystem::path& dir);

}  // namespace semperturb

#endif  // SEMPERTURB_SYNTHETIC_H_
