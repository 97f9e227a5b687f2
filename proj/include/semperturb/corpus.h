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

#ifndef SEMPERTURB_CORPUS_H_
#define SEMPERTURB_CORPUS_H_

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "semperturb/classifier.h"
#include "semperturb/vocab.h"

namespace semperturb {

enum class Tokenizer {
  kWhitespace,  // split on whitespace, lowercase ASCII
  kCharacter,   // one token per UTF-8 code point, whitespace dropped
};

std::vector<std::string> tokenize(std::string_view text, Tokenizer tokenizer);

struct CorpusSentence {
  std::vector<std::string> tokens;
  std::size_t label = 0;
  std::vector<bool> mask;  // empty: every position attackable
  // Key of this sentence's rows in the side vector file; defaults to the
  // sentence's line index.
  std::size_t side_key = 0;
};

struct Corpus {
  std::vector<CorpusSentence> sentences;
};

// Tab-separated: text, label, optional 0/1 mask ("-" for none), optional side
// vector key. Blank lines are skipped.
Corpus load_corpus(const std::filesystem::path& path, Tokenizer tokenizer);
void save_corpus(const std::filesystem::path& path, const Corpus& corpus,
                 Tokenizer tokenizer);

std::vector<TokenId> to_ids(std::span<const std::string> tokens,
                            const Vocabulary& vocab);
std::vector<LabeledSequence> to_sequences(const Corpus& corpus,
                                          const Vocabulary& vocab);

// Per-position contextual query vectors: "<sentence_key> <position> <f1> ...".
class SideVectors {
 public:
  std::size_t dim() const { return dim_; }
  std::size_t size() const { return rows_.size(); }

  // Throws kInconsistentDimension.
  void add(std::size_t sentence_key, std::size_t position,
           std::vector<double> vec);
  std::optional<std::span<const double>> find(std::size_t sentence_key,
                                               std::size_t position) const;
  const std::map<std::pair<std::size_t, std::size_t>, std::vector<double>>&
  rows() const {
    return rows_;
  }

 private:
  std::size_t dim_ = 0;
  std::map<std::pair<std::size_t, std::size_t>, std::vector<double>> rows_;
};

SideVectors load_side_vectors(const std::filesystem::path& path);
void save_side_vectors(const std::filesystem::path& path, const SideVectors& sv);

}  // namespace semperturb

#endif  // SEMPERTURB_CORPUS_H_
