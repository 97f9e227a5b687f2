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

#include "semperturb/synthetic.h"

#include <cstdio>
#include <fstream>
#include <random>

#include "semperturb/error.h"
#include "semperturb/text_util.h"

namespace semperturb {
namespace {

std::string numbered(const char* prefix, std::size_t i, int width) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s%0*zu", prefix, width, i);
  return buf;
}

}  // namespace

SyntheticWorld make_synthetic_world(const SyntheticOptions& o) {
  const std::size_t pairs = o.typo_pairs + o.knowledge_pairs + o.contextual_pairs;
  if (o.vocab_size < 2 * pairs + 2 || o.min_length < 2 ||
      o.max_length < o.min_length || o.sentences == 0) {
    throw Error(ErrorCode::kConfig, "synthetic options are inconsistent");
  }
  std::mt19937_64 rng(o.seed);
  auto uniform_index = [&rng](std::size_t n) { return static_cast<std::size_t>(rng() % n); };
  std::normal_distribution<double> normal(0.0, 1.0);

  // Keywords: per class, in group order typo, knowledge, contextual.
  std::vector<std::string> tokens = {"<unk>"};
  std::vector<std::vector<std::string>> keywords(2);
  auto add_pairs = [&](const char* a, const char* b, std::size_t count) {
    for (std::size_t i = 0; i < count; ++i) {
      keywords[0].push_back(numbered(a, i, 1));
      keywords[1].push_back(numbered(b, i, 1));
    }
  };
  add_pairs("ta", "tb", o.typo_pairs);
  add_pairs("kc", "kd", o.knowledge_pairs);
  add_pairs("ce", "cf", o.contextual_pairs);
  for (const auto& cls : keywords) tokens.insert(tokens.end(), cls.begin(), cls.end());
  const std::size_t filler_count = o.vocab_size - tokens.size();
  std::vector<std::string> fillers;
  for (std::size_t i = 0; i < filler_count; ++i) fillers.push_back(numbered("f", i, 3));
  tokens.insert(tokens.end(), fillers.begin(), fillers.end());

  SyntheticWorld world;
  world.vocab = Vocabulary::from_tokens(tokens);

  // Typo rules: look-alike a <-> b plus deletions, which never land in vocab.
  world.typo_rules.visual_subs = {{"a", {"b"}}, {"b", {"a"}}};
  world.typo_rules.enabled = {TypoRule::kDelete, TypoRule::kSubVisual};

  // Synonyms: two ADJ synsets with cross-class partners, one NOUN decoy that
  // loses the pos vote.
  for (std::size_t i = 0; i < o.knowledge_pairs; ++i) {
    for (int cls = 0; cls < 2; ++cls) {
      const std::string lemma = keywords[cls][o.typo_pairs + i];
      const auto& other = keywords[1 - cls];
      const std::size_t next = o.typo_pairs + (i + 1) % o.knowledge_pairs;
      world.synonyms.add_synset(lemma, {{other[o.typo_pairs + i], "ADJ"}});
      world.synonyms.add_synset(lemma, {{other[next], "ADJ"}});
      world.synonyms.add_synset(lemma, {{fillers[uniform_index(fillers.size())], "NOUN"}});
    }
  }

  // Contextual index: one tight cluster per contextual pair, one scattered
  // entry per filler.
  const std::size_t dim = o.context_dim;
  world.index = ContextualIndex(dim);
  std::vector<std::vector<double>> centers(o.contextual_pairs, std::vector<double>(dim));
  for (auto& c : centers) {
    for (auto& v : c) v = 10.0 * normal(rng);
  }
  std::vector<double> vec(dim);
  std::int64_t source = 0;
  for (std::size_t i = 0; i < o.contextual_pairs; ++i) {
    for (int cls = 0; cls < 2; ++cls) {
      const auto id = *world.vocab.find(keywords[cls][o.typo_pairs + o.knowledge_pairs + i]);
      for (std::size_t r = 0; r < o.cluster_size; ++r) {
        for (std::size_t j = 0; j < dim; ++j) vec[j] = centers[i][j] + 0.1 * normal(rng);
        world.index.add(id, vec, source++);
      }
    }
  }
  for (const auto& f : fillers) {
    for (std::size_t j = 0; j < dim; ++j) vec[j] = 10.0 * normal(rng);
    world.index.add(*world.vocab.find(f), vec, source++);
  }

  // Sentences come in minimal pairs: identical fillers and keyword position,
  // opposite-class keywords. Fillers therefore carry no label signal.
  std::vector<std::string> fill;
  std::size_t pos = 0;
  std::size_t kw = 0;
  std::vector<double> query;
  for (std::size_t s = 0; s < o.sentences; ++s) {
    const std::size_t label = s % 2;
    if (label == 0) {
      const std::size_t len = o.min_length + uniform_index(o.max_length - o.min_length + 1);
      fill.clear();
      for (std::size_t t = 0; t < len; ++t) {
        fill.push_back(fillers[uniform_index(fillers.size())]);
      }
      pos = uniform_index(len);
      kw = (s / 2) % pairs;
      if (kw >= o.typo_pairs + o.knowledge_pairs) {
        const auto& c = centers[kw - o.typo_pairs - o.knowledge_pairs];
        query.resize(dim);
        for (std::size_t j = 0; j < dim; ++j) query[j] = c[j] + 0.1 * normal(rng);
      }
    }
    CorpusSentence sentence;
    sentence.label = label;
    sentence.side_key = s;
    sentence.tokens = fill;
    sentence.tokens[pos] = keywords[label][kw];
    if (kw >= o.typo_pairs + o.knowledge_pairs) world.side_vectors.add(s, pos, query);
    world.corpus.sentences.push_back(std::move(sentence));
  }
  world.k = 2 * o.cluster_size + 6;
  world.eps = o.cluster_size > 2 ? o.cluster_size - 2 : 1;
  return world;
}

void write_synthetic_world(const SyntheticWorld& world,
                           const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "vocab.txt", std::ios::binary | std::ios::trunc);
    for (const auto& t : world.vocab.tokens()) out << t << '\n';
  }
  save_corpus(dir / "corpus.tsv", world.corpus, Tokenizer::kWhitespace);
  {
    std::ofstream out(dir / "typo_rules.txt", std::ios::binary | std::ios::trunc);
    out << "enabled: delete,sub_visual\n";
    for (const auto& [from, tos] : world.typo_rules.visual_subs) {
      out << "visual: " << from << " =";
      for (std::size_t i = 0; i < tos.size(); ++i) out << (i ? "," : " ") << tos[i];
      out << '\n';
    }
  }
  {
    std::ofstream out(dir / "synonyms.tsv", std::ios::binary | std::ios::trunc);
    for (const auto& lemma : world.vocab.tokens()) {
      const auto* synsets = world.synonyms.synsets(lemma);
      if (!synsets) continue;
      out << lemma << '\t';
      for (std::size_t s = 0; s < synsets->size(); ++s) {
        const auto& synset = (*synsets)[s];
        if (s) out << '|';
        out << (synset.empty() ? "NOUN" : synset.front().pos) << ':';
        for (std::size_t i = 0; i < synset.size(); ++i) {
          if (i) out << ',';
          out << synset[i].token;
        }
      }
      out << '\n';
    }
  }
  save_index(dir / "index.txt", world.index, world.vocab);
  save_side_vectors(dir / "side_vectors.txt", world.side_vectors);
}

}  // namespace semperturb
