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

#include "semperturb/neighbors.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <utility>

#include "semperturb/error.h"
#include "semperturb/text_util.h"

namespace semperturb {

void ContextualIndex::add(TokenId token, std::span<const double> vec,
                          std::optional<std::int64_t> source) {
  if (vec.size() != dim_) {
    throw Error(ErrorCode::kInconsistentDimension,
                "index vector of dim " + std::to_string(vec.size()) +
                    ", expected " + std::to_string(dim_));
  }
  for (double v : vec) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::kMalformedFile, "non-finite index component");
    }
  }
  token_ids_.push_back(token);
  source_ids_.push_back(source);
  data_.insert(data_.end(), vec.begin(), vec.end());
}

std::vector<NeighborHit> knn_query(const ContextualIndex& index,
                                   std::span<const double> query,
                                   std::size_t k) {
  if (query.size() != index.dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "query dim " + std::to_string(query.size()) + " vs index dim " +
                    std::to_string(index.dim()));
  }
  std::vector<std::pair<double, std::size_t>> scored(index.size());
  for (std::size_t e = 0; e < index.size(); ++e) {
    const auto vec = index.vector(e);
    double d2 = 0.0;
    for (std::size_t j = 0; j < vec.size(); ++j) {
      const double diff = query[j] - vec[j];
      d2 += diff * diff;
    }
    scored[e] = {d2, e};
  }
  const std::size_t n = std::min(k, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<long>(n),
                    scored.end());
  std::vector<NeighborHit> hits;
  hits.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    hits.push_back({index.token_id(scored[i].second),
                    std::sqrt(scored[i].first), scored[i].second});
  }
  return hits;
}

TokenId nearest_token_in_space(std::span<const double> perturbed,
                               std::span<const TokenId> candidates,
                               const EmbeddingMatrix& m, Norm p) {
  if (candidates.empty()) {
    throw Error(ErrorCode::kEmptySpace, "no candidates to project onto");
  }
  if (perturbed.size() != m.dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "perturbed vector dim " + std::to_string(perturbed.size()));
  }
  TokenId best = 0;
  double best_dist = 0.0;
  bool have_best = false;
  for (TokenId id : candidates) {
    const auto row = m.row(id);
    double dist = 0.0;
    if (p == Norm::kL1) {
      for (std::size_t j = 0; j < row.size(); ++j) {
        dist += std::abs(perturbed[j] - row[j]);
      }
    } else {
      // Squared distance preserves the l2 ordering.
      for (std::size_t j = 0; j < row.size(); ++j) {
        const double diff = perturbed[j] - row[j];
        dist += diff * diff;
      }
    }
    if (!have_best || dist < best_dist || (dist == best_dist && id < best)) {
      best = id;
      best_dist = dist;
      have_best = true;
    }
  }
  return best;
}

TokenId nearest_token_in_space(std::span<const double> perturbed,
                               const SearchSpace& space,
                               const EmbeddingMatrix& m, Norm p) {
  return nearest_token_in_space(perturbed, space.candidate_ids(), m, p);
}

BuiltIndex build_index(std::span<const IndexRecord> records,
                       const Vocabulary& vocab) {
  BuiltIndex built;
  if (records.empty()) return built;
  const std::size_t dim = records.front().vector.size();
  built.index = ContextualIndex(dim);
  for (const auto& rec : records) {
    if (rec.vector.size() != dim) {
      throw Error(ErrorCode::kInconsistentDimension,
                  "record for '" + rec.token + "' has dim " +
                      std::to_string(rec.vector.size()) + ", expected " +
                      std::to_string(dim));
    }
    const auto id = vocab.find(rec.token);
    if (!id) {
      ++built.dropped;
      continue;
    }
    built.index.add(*id, rec.vector, rec.source);
  }
  return built;
}

BuiltIndex load_index(const std::filesystem::path& path,
                      const Vocabulary& vocab) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) {
    throw Error(ErrorCode::kMalformedFile, path.string() + ": missing header");
  }
  const auto dim_field = parse_int(line, path.string() + " header");
  if (dim_field <= 0) {
    throw Error(ErrorCode::kMalformedFile, path.string() + ": bad dimension");
  }
  const auto dim = static_cast<std::size_t>(dim_field);
  BuiltIndex built;
  built.index = ContextualIndex(dim);
  std::vector<double> vec(dim);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_whitespace(line);
    if (fields.size() != dim + 2) {
      throw Error(ErrorCode::kInconsistentDimension,
                  path.string() + ":" + std::to_string(line_no) + ": expected " +
                      std::to_string(dim) + " components");
    }
    std::optional<std::int64_t> source;
    if (fields[1] != "-") source = parse_int(fields[1], path.string());
    for (std::size_t j = 0; j < dim; ++j) {
      vec[j] = parse_double(fields[j + 2], path.string());
    }
    const auto id = vocab.find(fields[0]);
    if (!id) {
      ++built.dropped;
      continue;
    }
    built.index.add(*id, vec, source);
  }
  return built;
}

void save_index(const std::filesystem::path& path, const ContextualIndex& index,
                const Vocabulary& vocab) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << index.dim() << '\n';
  for (std::size_t e = 0; e < index.size(); ++e) {
    out << vocab.token(index.token_id(e)) << ' ';
    if (const auto src = index.source_id(e)) {
      out << *src;
    } else {
      out << '-';
    }
    for (double v : index.vector(e)) out << ' ' << format_double(v);
    out << '\n';
  }
}

}  // namespace semperturb
