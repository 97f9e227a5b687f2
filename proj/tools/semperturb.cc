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

// Command-line front end: train, distill, attack, transfer, audit-spaces and
// synth (demo workspace).

#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "semperturb/campaign.h"
#include "semperturb/error.h"
#include "semperturb/synthetic.h"

namespace {

namespace fs = std::filesystem;
using semperturb::CampaignConfig;

constexpr int kUsageError = 2;
constexpr int kRuntimeError = 3;

void write_demo_config(const fs::path& dir, const semperturb::SyntheticWorld& world) {
  std::ofstream out(dir / "config.json", std::ios::binary | std::ios::trunc);
  out << "{\n"
         "  \"tokenizer\": \"whitespace\",\n"
         "  \"parallelism\": 1,\n"
         "  \"resources\": {\n"
         "    \"vocab\": \"vocab.txt\",\n"
         "    \"corpus\": \"corpus.tsv\",\n"
         "    \"typo_rules\": \"typo_rules.txt\",\n"
         "    \"synonyms\": \"synonyms.tsv\",\n"
         "    \"index\": \"index.txt\",\n"
         "    \"side_vectors\": \"side_vectors.txt\"\n"
         "  },\n"
         "  \"classifier\": {\"path\": \"model.bin\", \"dim\": 64, \"hidden\": 128, \"classes\": 2},\n"
         "  \"train\": {\"learning_rate\": 0.01, \"epochs\": 20, \"batch_size\": 16, \"seed\": 1111},\n"
         "  \"perturb\": {\"functions\": [\"typo\", \"knowledge\", \"contextual\"], \"k\": "
      << world.k << ", \"eps\": " << world.eps
      << "},\n"
         "  \"attack\": {\"c\": 100, \"kappa\": 1, \"m\": 100, \"p\": 2, \"alpha\": 0.1,"
         " \"goal\": \"untargeted\"},\n"
         "  \"output\": {\"dataset\": \"out/adversarial.tsv\", \"report\": \"out/report.txt\","
         " \"table\": \"out/table.csv\", \"space_report\": \"out/spaces.txt\","
         " \"student_model\": \"student.bin\", \"teacher_outputs\": \"out/teacher_outputs.tsv\"}\n"
         "}\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Embedding-space adversarial attacks on text classifiers"};
  app.require_subcommand(1);

  std::string config_path;
  std::string model_path;
  std::string out_path;
  std::string teacher_path;
  std::string dataset_path;
  std::string report_path;
  std::size_t parallelism = 0;
  std::uint64_t synth_seed = 1111;
  std::size_t synth_sentences = 200;

  auto* train = app.add_subcommand("train", "Train the classifier on the corpus");
  train->add_option("--config", config_path, "Campaign config (JSON)")->required();
  train->add_option("--out", out_path, "Model file (overrides classifier.path)");

  auto* distill = app.add_subcommand("distill", "Distill a student from a teacher model");
  distill->add_option("--config", config_path, "Campaign config (JSON)")->required();
  distill->add_option("--teacher", teacher_path, "Teacher model file")->required();
  distill->add_option("--out", out_path, "Student model file");

  auto* attack = app.add_subcommand("attack", "Attack every corpus sentence");
  attack->add_option("--config", config_path, "Campaign config (JSON)")->required();
  attack->add_option("--model", model_path, "Model to attack (overrides classifier.path)");
  attack->add_option("--out", out_path, "Adversarial dataset file");
  attack->add_option("--report", report_path, "Metrics report file");
  attack->add_option("--parallelism", parallelism, "Worker threads");

  auto* transfer = app.add_subcommand("transfer", "Score a fixed adversarial dataset on another model");
  transfer->add_option("--dataset", dataset_path, "Adversarial dataset file")->required();
  transfer->add_option("--model", model_path, "Model file")->required();
  transfer->add_option("--report", report_path, "Report file");

  auto* audit = app.add_subcommand("audit-spaces", "Report mean search space sizes");
  audit->add_option("--config", config_path, "Campaign config (JSON)")->required();
  audit->add_option("--out", out_path, "Space report file");
  audit->add_option("--parallelism", parallelism, "Worker threads");

  auto* synth = app.add_subcommand("synth", "Write a synthetic demo workspace");
  synth->add_option("--out", out_path, "Workspace directory")->required();
  synth->add_option("--seed", synth_seed, "Generator seed");
  synth->add_option("--sentences", synth_sentences, "Corpus size");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    auto load_config = [&] {
      CampaignConfig cfg = semperturb::load_campaign_config(config_path);
      if (parallelism > 0) cfg.parallelism = parallelism;
      return cfg;
    };
    if (train->parsed()) {
      auto cfg = load_config();
      if (!out_path.empty()) cfg.model = out_path;
      semperturb::cmd_train(cfg, std::cout);
    } else if (distill->parsed()) {
      auto cfg = load_config();
      if (!out_path.empty()) cfg.output.student_model = out_path;
      semperturb::cmd_distill(cfg, teacher_path, std::cout);
    } else if (attack->parsed()) {
      auto cfg = load_config();
      if (!model_path.empty()) cfg.model = model_path;
      if (!out_path.empty()) cfg.output.dataset = out_path;
      if (!report_path.empty()) cfg.output.report = report_path;
      semperturb::cmd_attack(cfg, std::cout);
    } else if (transfer->parsed()) {
      std::optional<fs::path> report;
      if (!report_path.empty()) report = report_path;
      semperturb::cmd_transfer(dataset_path, model_path, report, std::cout);
    } else if (audit->parsed()) {
      auto cfg = load_config();
      if (!out_path.empty()) cfg.output.space_report = out_path;
      semperturb::cmd_audit_spaces(cfg, std::cout);
    } else if (synth->parsed()) {
      semperturb::SyntheticOptions options;
      options.seed = synth_seed;
      options.sentences = synth_sentences;
      const auto world = semperturb::make_synthetic_world(options);
      semperturb::write_synthetic_world(world, out_path);
      write_demo_config(out_path, world);
      std::cout << "wrote " << world.corpus.sentences.size() << " sentences to "
                << out_path << '\n';
    }
  } catch (const semperturb::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return semperturb::exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return 0;
}
