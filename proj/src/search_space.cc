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

#include "semperturb/search_space.h"

#include <algorithm>
#include <string>

#include "semperturb/error.h"

namespace semperturb {

SearchSpace::SearchSpace(TokenId original, std::vector<TokenId> candidates)
    : original_(original), ids_(std::move(candidates)) {
  ids_.push_back(original);
  std::sort(ids_.begin(), ids_.end());
  ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
}

bool SearchSpace::contains(TokenId id) const {
  return std::binary_search(ids_.begin(), ids_.end(), id);
}

void SearchSpace::merge(const SearchSpace& other) {
  std::vector<TokenId> merged;
  merged.reserve(ids_.size() + other.ids_.size());
  std::set_union(ids_.begin(), ids_.end(), other.ids_.begin(),
                 other.ids_.end(), std::back_inserter(merged));
  ids_ = std::move(merged);
}

void SearchSpace::validate(std::size_t vocab_size) const {
  if (!ids_.empty() && ids_.back() >= vocab_size) {
    throw Error(ErrorCode::kIdOutOfRange,
                "search space id " + std::to_string(ids_.back()) +
                    " outside vocabulary of " + std::to_string(vocab_size));
  }
}

}  // namespace semperturb
