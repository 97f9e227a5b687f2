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

#ifndef SEMPERTURB_TESTS_WORKSPACE_H_
#define SEMPERTURB_TESTS_WORKSPACE_H_

#include <filesystem>
#include <fstream>
#include <string>

#include "json.hpp"
#include "semperturb/synthetic.h"

namespace semperturb::testing {

// Synthetic resources on disk plus a campaign config pointing at them.
struct Workspace {
  std::filesystem::path dir;
  SyntheticWorld world;
  nlohmann::json config;

  std::filesystem::path config_path() const { return dir / "config.json"; }

  void save_config() const {
    std::ofstream out(config_path(), std::ios::binary | std::ios::trunc);
    out << config.dump(2) << '\n';
  }
};

// Small dims keep the unit tests fast; the acceptance suite uses the defaults.
inline Workspace make_workspace(const std::filesystem::path& dir,
                                const SyntheticOptions& options = {},
                                bool small_model = true) {
  Workspace ws{dir, make_synthetic_world(options), {}};
  std::filesystem::create_directories(dir);
  write_synthetic_world(ws.world, dir);
  ws.config = {
      {"tokenizer", "whitespace"},
      {"parallelism", 1},
      {"resources",
       {{"vocab", "vocab.txt"},
        {"corpus", "corpus.tsv"},
        {"typo_rules", "typo_rules.txt"},
        {"synonyms", "synonyms.tsv"},
        {"index", "index.txt"},
        {"side_vectors", "side_vectors.txt"}}},
      {"classifier",
       {{"path", "model.bin"},
        {"dim", small_model ? 16 : 64},
        {"hidden", small_model ? 32 : 128},
        {"classes", 2}}},
      {"train", {{"learning_rate", 0.01}, {"epochs", 20}, {"batch_size", 16}, {"seed", 1111}}},
      {"perturb",
       {{"functions", {"typo", "knowledge", "contextual"}},
        {"k", ws.world.k},
        {"eps", ws.world.eps}}},
      {"attack", {{"c", 100}, {"kappa", 1}, {"m", 100}, {"p", 2}, {"goal", "untargeted"}}},
      {"output",
       {{"student_model", "student.bin"},
        {"teacher_outputs", "out/teacher_outputs.tsv"},
        {"dataset", "out/adversarial.tsv"},
        {"report", "out/report.txt"},
        {"table", "out/table.csv"},
        {"space_report", "out/spaces.txt"}}},
  };
  ws.save_config();
  return ws;
}

}  // namespace semperturb::testing

#endif  // SEMPERTURB_TESTS_WORKSPACE_H_
