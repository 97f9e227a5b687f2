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

#ifndef SEMPERTURB_SEARCH_SPACE_H_
#define SEMPERTURB_SEARCH_SPACE_H_

#include <span>
#include <vector>

#include "semperturb/vocab.h"

namespace semperturb {

// Candidate substitutions for one position. Candidates are kept sorted and
// unique, and always contain the original token.
class SearchSpace {
 public:
  explicit SearchSpace(TokenId original) : original_(original), ids_{original} {}
  SearchSpace(TokenId original, std::vector<TokenId> candidates);

  TokenId original_id() const { return original_; }
  std::span<const TokenId> candidate_ids() const { return ids_; }
  std::size_t size() const { return ids_.size(); }
  bool is_singleton() const { return ids_.size() == 1; }
  bool contains(TokenId id) const;

  // Union with another space for the same original token.
  void merge(const SearchSpace& other);

  // Throws kIdOutOfRange if any id is >= vocab_size.
  void validate(std::size_t vocab_size) const;

  bool operator==(const SearchSpace&) const = default;

 private:
  TokenId original_;
  std::vector<TokenId> ids_;
};

}  // namespace semperturb

#endif  // SEMPERTURB_SEARCH_SPACE_H_
