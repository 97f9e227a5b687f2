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

#ifndef SEMPERTURB_CAMPAIGN_H_
#define SEMPERTURB_CAMPAIGN_H_

#include <filesystem>
#include <optional>
#include <ostream>
#include <string_view>

#include "semperturb/attack.h"
#include "semperturb/classifier.h"
#include "semperturb/corpus.h"
#include "semperturb/error.h"
#include "semperturb/evaluation.h"
#include "semperturb/perturb.h"

namespace semperturb {

struct ResourcePaths {
  std::filesystem::path vocab;
  std::filesystem::path corpus;
  std::optional<std::filesystem::path> typo_rules;
  std::optional<std::filesystem::path> synonyms;
  std::optional<std::filesystem::path> index;
  std::optional<std::filesystem::path> side_vectors;
  // Static token vectors in the index space, for the contextual fallback.
  std::optional<std::filesystem::path> static_embeddings;
};

struct OutputPaths {
  std::filesystem::path student_model;
  std::filesystem::path teacher_outputs;
  std::filesystem::path dataset;
  std::filesystem::path report;
  std::filesystem::path table;
  std::filesystem::path space_report;
};

struct CampaignConfig {
  ResourcePaths resources;
  // Written by train, read by attack and audit-spaces.
  std::filesystem::path model;
  ClassifierDims dims;
  TrainConfig train;
  Tokenizer tokenizer = Tokenizer::kWhitespace;
  PerturbConfig perturb;
  AttackConfig attack;
  std::size_t parallelism = 1;
  OutputPaths output;

  // Value checks only (k >= eps >= 1, kappa >= 0, p in {1,2}, m >= 1, ...).
  // Throws kConfig.
  void validate() const;
};

// JSON text; relative paths resolve against base_dir. Unknown keys are
// rejected. Throws kConfig.
CampaignConfig parse_campaign_config(std::string_view text,
                                     const std::filesystem::path& base_dir);
CampaignConfig load_campaign_config(const std::filesystem::path& path);

// Each command validates everything it reads before writing any output, and
// writes identical bytes on identical inputs.
void cmd_train(const CampaignConfig& cfg, std::ostream& log);
void cmd_distill(const CampaignConfig& cfg,
                 const std::filesystem::path& teacher_model,
                 std::ostream& log);
MetricsReport cmd_attack(const CampaignConfig& cfg, std::ostream& log);
MetricsReport cmd_transfer(const std::filesystem::path& dataset,
                           const std::filesystem::path& model,
                           const std::optional<std::filesystem::path>& report,
                           std::ostream& log);
SpaceStats cmd_audit_spaces(const CampaignConfig& cfg, std::ostream& log);

// 0 success, 2 usage/config/file error, 3 runtime data error.
int exit_code_for(ErrorCode code);

}  // namespace semperturb

#endif  // SEMPERTURB_CAMPAIGN_H_
