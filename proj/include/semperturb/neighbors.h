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

#ifndef SEMPERTURB_NEIGHBORS_H_
#define SEMPERTURB_NEIGHBORS_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "semperturb/search_space.h"
#include "semperturb/vocab.h"

namespace semperturb {

enum class Norm { kL1 = 1, kL2 = 2 };

// Bank of (token, context vector) records searched by knn_query.
class ContextualIndex {
 public:
  explicit ContextualIndex(std::size_t dim = 0) : dim_(dim) {}

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return token_ids_.size(); }
  bool empty() const { return token_ids_.empty(); }

  TokenId token_id(std::size_t entry) const { return token_ids_[entry]; }
  std::optional<std::int64_t> source_id(std::size_t entry) const {
    return source_ids_[entry];
  }
  std::span<const double> vector(std::size_t entry) const {
    return {data_.data() + entry * dim_, dim_};
  }

  // Throws kInconsistentDimension or kMalformedFile (non-finite component).
  void add(TokenId token, std::span<const double> vec,
           std::optional<std::int64_t> source = std::nullopt);

 private:
  std::size_t dim_;
  std::vector<TokenId> token_ids_;
  std::vector<std::optional<std::int64_t>> source_ids_;
  std::vector<double> data_;
};

struct NeighborHit {
  TokenId token_id;
  double distance;
  std::size_t entry;
};

// Exact Euclidean k-nearest search by full scan. Hits are ordered by
// ascending distance, ties by ascending entry position.
std::vector<NeighborHit> knn_query(const ContextualIndex& index,
                                   std::span<const double> query,
                                   std::size_t k);

// argmin over candidates of ||perturbed - m[s]||_p, ties to the lowest id.
TokenId nearest_token_in_space(std::span<const double> perturbed,
                               std::span<const TokenId> candidates,
                               const EmbeddingMatrix& m, Norm p);
TokenId nearest_token_in_space(std::span<const double> perturbed,
                               const SearchSpace& space,
                               const EmbeddingMatrix& m, Norm p);

struct IndexRecord {
  std::string token;
  std::vector<double> vector;
  std::optional<std::int64_t> source;
};

struct BuiltIndex {
  ContextualIndex index;
  std::size_t dropped = 0;
};

// Records whose token is not in vocab are dropped and counted; the rest are
// stored in input order.
BuiltIndex build_index(std::span<const IndexRecord> records,
                       const Vocabulary& vocab);

// Header "<dim>", then "<token> <source_id|-> <f1> ... <fdim>" lines.
BuiltIndex load_index(const std::filesystem::path& path,
                      const Vocabulary& vocab);
void save_index(const std::filesystem::path& path, const ContextualIndex& index,
                const Vocabulary& vocab);

}  // namespace semperturb

#endif  // SEMPERTURB_NEIGHBORS_H_
