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

#include "semperturb/corpus.h"

#include <fstream>

#include "semperturb/error.h"
#include "semperturb/text_util.h"

namespace semperturb {

std::vector<std::string> tokenize(std::string_view text, Tokenizer tokenizer) {
  if (tokenizer == Tokenizer::kWhitespace) {
    auto tokens = split_whitespace(text);
    for (auto& t : tokens) t = to_lower_ascii(t);
    return tokens;
  }
  std::vector<std::string> tokens;
  for (auto& cp : utf8_code_points(text)) {
    if (!trim(cp).empty()) tokens.push_back(std::move(cp));
  }
  return tokens;
}

Corpus load_corpus(const std::filesystem::path& path, Tokenizer tokenizer) {
  const auto lines = read_lines(path);
  Corpus corpus;
  for (std::size_t n = 0; n < lines.size(); ++n) {
    if (trim(lines[n]).empty()) continue;
    const auto where = path.string() + ":" + std::to_string(n + 1);
    const auto fields = split(lines[n], '\t');
    if (fields.size() < 2 || fields.size() > 4) {
      throw Error(ErrorCode::kMalformedFile, where + ": expected 2-4 tab-separated fields");
    }
    CorpusSentence s;
    s.tokens = tokenize(fields[0], tokenizer);
    if (s.tokens.empty()) throw Error(ErrorCode::kMalformedFile, where + ": empty text");
    const auto label = parse_int(fields[1], where);
    if (label < 0) throw Error(ErrorCode::kMalformedFile, where + ": negative label");
    s.label = static_cast<std::size_t>(label);
    if (fields.size() >= 3) {
      const auto mask = trim(fields[2]);
      if (!mask.empty() && mask != "-") {
        if (mask.size() != s.tokens.size()) {
          throw Error(ErrorCode::kMalformedFile,
                      where + ": mask length " + std::to_string(mask.size()) +
                          " != " + std::to_string(s.tokens.size()) + " tokens");
        }
        for (char c : mask) {
          if (c != '0' && c != '1') {
            throw Error(ErrorCode::kMalformedFile, where + ": mask must be 0/1");
          }
          s.mask.push_back(c == '1');
        }
      }
    }
    s.side_key = corpus.sentences.size();
    if (fields.size() == 4 && !trim(fields[3]).empty()) {
      const auto key = parse_int(fields[3], where);
      if (key < 0) throw Error(ErrorCode::kMalformedFile, where + ": negative side key");
      s.side_key = static_cast<std::size_t>(key);
    }
    corpus.sentences.push_back(std::move(s));
  }
  return corpus;
}

void save_corpus(const std::filesystem::path& path, const Corpus& corpus,
                 Tokenizer tokenizer) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  const char* sep = tokenizer == Tokenizer::kWhitespace ? " " : "";
  for (std::size_t i = 0; i < corpus.sentences.size(); ++i) {
    const auto& s = corpus.sentences[i];
    for (std::size_t t = 0; t < s.tokens.size(); ++t) {
      if (t) out << sep;
      out << s.tokens[t];
    }
    out << '\t' << s.label << '\t';
    if (s.mask.empty()) {
      out << '-';
    } else {
      for (bool b : s.mask) out << (b ? '1' : '0');
    }
    if (s.side_key != i) out << '\t' << s.side_key;
    out << '\n';
  }
}

std::vector<TokenId> to_ids(std::span<const std::string> tokens,
                            const Vocabulary& vocab) {
  std::vector<TokenId> ids;
  ids.reserve(tokens.size());
  for (const auto& t : tokens) ids.push_back(vocab.id_or_unk(t));
  return ids;
}

std::vector<LabeledSequence> to_sequences(const Corpus& corpus,
                                          const Vocabulary& vocab) {
  std::vector<LabeledSequence> out;
  out.reserve(corpus.sentences.size());
  for (const auto& s : corpus.sentences) {
    out.push_back({to_ids(s.tokens, vocab), s.label});
  }
  return out;
}

void SideVectors::add(std::size_t sentence_key, std::size_t position,
                      std::vector<double> vec) {
  if (rows_.empty()) {
    dim_ = vec.size();
  } else if (vec.size() != dim_) {
    throw Error(ErrorCode::kInconsistentDimension,
                "side vector of dim " + std::to_string(vec.size()) +
                    ", expected " + std::to_string(dim_));
  }
  rows_[{sentence_key, position}] = std::move(vec);
}

std::optional<std::span<const double>> SideVectors::find(
    std::size_t sentence_key, std::size_t position) const {
  auto it = rows_.find({sentence_key, position});
  if (it == rows_.end()) return std::nullopt;
  return std::span<const double>(it->second);
}

SideVectors load_side_vectors(const std::filesystem::path& path) {
  const auto lines = read_lines(path);
  SideVectors sv;
  for (std::size_t n = 0; n < lines.size(); ++n) {
    if (trim(lines[n]).empty()) continue;
    const auto where = path.string() + ":" + std::to_string(n + 1);
    const auto fields = split_whitespace(lines[n]);
    if (fields.size() < 3) throw Error(ErrorCode::kMalformedFile, where);
    const auto key = parse_int(fields[0], where);
    const auto pos = parse_int(fields[1], where);
    if (key < 0 || pos < 0) throw Error(ErrorCode::kMalformedFile, where);
    std::vector<double> vec;
    for (std::size_t j = 2; j < fields.size(); ++j) {
      vec.push_back(parse_double(fields[j], where));
    }
    sv.add(static_cast<std::size_t>(key), static_cast<std::size_t>(pos), std::move(vec));
  }
  return sv;
}

void save_side_vectors(const std::filesystem::path& path, const SideVectors& sv) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  for (const auto& [key, vec] : sv.rows()) {
    out << key.first << ' ' << key.second;
    for (double v : vec) out << ' ' << format_double(v);
    out << '\n';
  }
}

}  // namespace semperturb
