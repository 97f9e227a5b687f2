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

#include "semperturb/vocab.h"

#include <cmath>
#include <fstream>

#include "semperturb/error.h"
#include "semperturb/text_util.h"

namespace semperturb {

Vocabulary Vocabulary::from_tokens(std::vector<std::string> tokens) {
  if (tokens.empty()) {
    throw Error(ErrorCode::kMalformedFile,
                "vocabulary has no unknown-token line");
  }
  Vocabulary vocab;
  vocab.ids_.reserve(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const std::string& tok = tokens[i];
    if (tok.empty() || split_whitespace(tok).size() != 1 ||
        split_whitespace(tok)[0] != tok) {
      throw Error(ErrorCode::kMalformedFile,
                  "bad vocabulary line " + std::to_string(i));
    }
    if (!vocab.ids_.emplace(tok, static_cast<TokenId>(i)).second) {
      throw Error(ErrorCode::kMalformedFile,
                  "duplicate token '" + tok + "' at line " +
                      std::to_string(i));
    }
  }
  vocab.tokens_ = std::move(tokens);
  return vocab;
}

const std::string& Vocabulary::token(TokenId id) const {
  if (id >= tokens_.size()) {
    throw Error(ErrorCode::kIdOutOfRange, "token id " + std::to_string(id));
  }
  return tokens_[id];
}

std::optional<TokenId> Vocabulary::find(std::string_view token) const {
  auto it = ids_.find(std::string(token));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

TokenId Vocabulary::id_or_unk(std::string_view token) const {
  return find(token).value_or(unk_id());
}

std::uint64_t Vocabulary::fingerprint() const {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](unsigned char c) {
    h ^= c;
    h *= 1099511628211ULL;
  };
  for (const auto& tok : tokens_) {
    for (char c : tok) mix(static_cast<unsigned char>(c));
    mix('\n');
  }
  return h;
}

Vocabulary load_vocabulary(const std::filesystem::path& path) {
  return Vocabulary::from_tokens(read_lines(path));
}

EmbeddingMatrix::EmbeddingMatrix(RowMatrix rows) : rows_(std::move(rows)) {
  if (rows_.cols() == 0) {
    throw Error(ErrorCode::kMalformedFile, "embedding dimension is zero");
  }
  if (!rows_.allFinite()) {
    throw Error(ErrorCode::kMalformedFile, "non-finite embedding component");
  }
}

std::span<const double> EmbeddingMatrix::row(TokenId id) const {
  if (id >= rows()) {
    throw Error(ErrorCode::kIdOutOfRange, "embedding row " + std::to_string(id));
  }
  return {rows_.data() + static_cast<std::size_t>(id) * dim(), dim()};
}

EmbeddingMatrix load_embeddings(const std::filesystem::path& path,
                                const Vocabulary& vocab) {
  const auto lines = read_lines(path);
  if (lines.empty()) {
    throw Error(ErrorCode::kMalformedFile, path.string() + ": missing header");
  }
  const auto header = split_whitespace(lines[0]);
  if (header.size() != 2) {
    throw Error(ErrorCode::kMalformedFile, path.string() + ": bad header");
  }
  const auto count = parse_int(header[0], "embedding header");
  const auto dim = parse_int(header[1], "embedding header");
  if (count != static_cast<std::int64_t>(vocab.size()) || dim <= 0) {
    throw Error(ErrorCode::kMalformedFile,
                path.string() + ": header does not match vocabulary size " +
                    std::to_string(vocab.size()));
  }
  if (lines.size() < static_cast<std::size_t>(count) + 1) {
    throw Error(ErrorCode::kMalformedFile, path.string() + ": truncated");
  }
  RowMatrix rows(count, dim);
  for (std::int64_t r = 0; r < count; ++r) {
    const auto fields = split_whitespace(lines[r + 1]);
    if (fields.size() != static_cast<std::size_t>(dim) + 1 ||
        fields[0] != vocab.token(static_cast<TokenId>(r))) {
      throw Error(ErrorCode::kMalformedFile,
                  path.string() + ": bad row " + std::to_string(r + 1));
    }
    for (std::int64_t c = 0; c < dim; ++c) {
      rows(r, c) = parse_double(fields[c + 1], path.string());
    }
  }
  return EmbeddingMatrix(std::move(rows));
}

void save_embeddings(const std::filesystem::path& path,
                     const Vocabulary& vocab, const EmbeddingMatrix& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << m.rows() << ' ' << m.dim() << '\n';
  for (std::size_t r = 0; r < m.rows(); ++r) {
    out << vocab.token(static_cast<TokenId>(r));
    for (double v : m.row(static_cast<TokenId>(r))) out << ' ' << format_double(v);
    out << '\n';
  }
}

RowMatrix embed_sequence(std::span<const TokenId> ids,
                         const EmbeddingMatrix& m) {
  RowMatrix out(static_cast<Eigen::Index>(ids.size()),
                static_cast<Eigen::Index>(m.dim()));
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] >= m.rows()) {
      throw Error(ErrorCode::kIdOutOfRange,
                  "token id " + std::to_string(ids[i]) + " at position " +
                      std::to_string(i));
    }
    out.row(static_cast<Eigen::Index>(i)) = m.matrix().row(ids[i]);
  }
  return out;
}

}  // namespace semperturb
