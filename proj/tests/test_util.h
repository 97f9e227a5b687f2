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

#ifndef SEMPERTURB_TESTS_TEST_UTIL_H_
#define SEMPERTURB_TESTS_TEST_UTIL_H_

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "semperturb/classifier.h"
#include "semperturb/error.h"
#include "semperturb/vocab.h"

namespace semperturb::testing {

// Code of the Error thrown by fn; records a failure if nothing is thrown.
template <typename Fn>
ErrorCode error_code_of(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::kConfig;
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("semperturb_" + tag + "_" + std::to_string(rd()) + "_" +
             std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// "<unk>", "t1", ..., "t<n-1>".
inline Vocabulary numbered_vocab(std::size_t n) {
  std::vector<std::string> tokens = {"<unk>"};
  for (std::size_t i = 1; i < n; ++i) tokens.push_back("t" + std::to_string(i));
  return Vocabulary::from_tokens(tokens);
}

inline ClassifierModel random_model(std::size_t vocab_size, ClassifierDims dims,
                                    std::uint64_t seed) {
  return ClassifierModel::initialize(numbered_vocab(vocab_size), dims, 1.0, seed);
}

inline std::vector<TokenId> random_ids(std::mt19937_64& rng, std::size_t n,
                                       std::size_t vocab_size) {
  std::vector<TokenId> ids(n);
  for (auto& id : ids) id = static_cast<TokenId>(1 + rng() % (vocab_size - 1));
  return ids;
}

}  // namespace semperturb::testing

#endif  // SEMPERTURB_TESTS_TEST_UTIL_H_
