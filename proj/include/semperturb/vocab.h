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

#ifndef SEMPERTURB_VOCAB_H_
#define SEMPERTURB_VOCAB_H_

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace semperturb {

using TokenId = std::uint32_t;

// Row-major so each token row (and each sequence position) is contiguous.
using RowMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Dense token <-> id map. Id 0 is always the unknown token.
class Vocabulary {
 public:
  Vocabulary() = default;

  // tokens[0] is the unknown token. Throws kMalformedFile on an empty list,
  // an empty or whitespace-bearing token, or a duplicate.
  static Vocabulary from_tokens(std::vector<std::string> tokens);

  std::size_t size() const { return tokens_.size(); }
  TokenId unk_id() const { return 0; }
  const std::string& token(TokenId id) const;
  const std::vector<std::string>& tokens() const { return tokens_; }

  std::optional<TokenId> find(std::string_view token) const;
  TokenId id_or_unk(std::string_view token) const;
  bool contains(std::string_view token) const { return find(token).has_value(); }

  // FNV-1a over the newline-joined token list; identifies a vocabulary in
  // dataset headers and model files.
  std::uint64_t fingerprint() const;

  bool operator==(const Vocabulary& other) const {
    return tokens_ == other.tokens_;
  }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, TokenId> ids_;
};

Vocabulary load_vocabulary(const std::filesystem::path& path);

// The |V| x d matrix mapping token ids to embedding rows.
class EmbeddingMatrix {
 public:
  EmbeddingMatrix() = default;
  // Throws kMalformedFile if any component is non-finite or dim is zero.
  explicit EmbeddingMatrix(RowMatrix rows);

  std::size_t rows() const { return static_cast<std::size_t>(rows_.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(rows_.cols()); }
  std::span<const double> row(TokenId id) const;
  const RowMatrix& matrix() const { return rows_; }
  RowMatrix& mutable_matrix() { return rows_; }

 private:
  RowMatrix rows_;
};

// Header "<|V|> <dim>" then one "<token> <f1> ... <fdim>" line per token, in
// vocabulary order.
EmbeddingMatrix load_embeddings(const std::filesystem::path& path,
                                const Vocabulary& vocab);
void save_embeddings(const std::filesystem::path& path,
                     const Vocabulary& vocab, const EmbeddingMatrix& m);

// Row i of the result is row ids[i] of m. Throws kIdOutOfRange.
RowMatrix embed_sequence(std::span<const TokenId> ids,
                         const EmbeddingMatrix& m);

}  // namespace semperturb

#endif  // SEMPERTURB_VOCAB_H_
