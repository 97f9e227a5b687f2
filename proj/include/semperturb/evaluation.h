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

#ifndef SEMPERTURB_EVALUATION_H_
#define SEMPERTURB_EVALUATION_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "semperturb/classifier.h"
#include "semperturb/perturb.h"
#include "semperturb/vocab.h"

namespace semperturb {

struct AdvRecord {
  std::vector<TokenId> original_ids;
  std::vector<TokenId> adversarial_ids;
  std::size_t truth = 0;
  std::optional<std::size_t> target;
  bool success = false;  // as judged by the generating model
  std::vector<std::size_t> perturbed_positions;
  std::vector<bool> mask;  // empty: every position attackable
};

struct AdvDataset {
  std::vector<AdvRecord> records;
  std::uint64_t vocab_fingerprint = 0;

  // Throws kShapeMismatch (length mismatch) or kTargetEqualsTruth.
  void validate() const;
};

// Fraction of records whose adversarial text `model` assigns to the target.
// Throws kEmptyDataset, kMissingTarget.
double tsr(const AdvDataset& dataset, const ClassifierModel& model);
// Fraction of records whose adversarial text `model` does not assign to the
// true class. Throws kEmptyDataset.
double usr(const AdvDataset& dataset, const ClassifierModel& model);

// |perturbed| / number of attackable positions (0 when none are attackable).
double perturbation_rate(const AdvRecord& record);

// Mean number of non-identity candidates per position, per enabled function
// and for the union ("union").
struct SpaceStats {
  std::size_t positions = 0;
  std::map<std::string, double> mean_candidates;
};

SpaceStats space_stats(std::span<const PositionSpaces> spaces);

struct MetricsReport {
  std::size_t records = 0;
  std::size_t rejected = 0;
  std::size_t untargeted_successes = 0;
  std::optional<std::size_t> targeted_successes;
  double usr = 0.0;
  std::optional<double> tsr;
  // Means over successful records only.
  double perturbation_untargeted = 0.0;
  std::optional<double> perturbation_targeted;
  SpaceStats spaces;
};

// Scores the dataset against `model`. tsr is reported when every record has a
// target. Throws kEmptyDataset.
MetricsReport evaluate(const AdvDataset& dataset, const ClassifierModel& model);

// Zero-query transfer: evaluate fixed adversarial texts against another model
// that shares the generator's vocabulary. Throws kVocabMismatch.
MetricsReport transfer_eval(const AdvDataset& dataset,
                            const ClassifierModel& other_model);

// First line "#vocab\t<fingerprint hex>\t<|V|>", then one record per line:
// original tokens, adversarial tokens, y, y* or "-", comma-separated perturbed
// indices or "-", success 0/1, mask or "-".
void save_dataset(const std::filesystem::path& path, const AdvDataset& dataset,
                  const Vocabulary& vocab);
// Throws kVocabMismatch if the header or any token disagrees with vocab.
AdvDataset load_dataset(const std::filesystem::path& path,
                        const Vocabulary& vocab);

// "key = value" lines.
std::string format_report(const MetricsReport& report);
// One CSV row per record, scored with `model`.
std::string format_table(const AdvDataset& dataset, const ClassifierModel& model);
std::string format_space_stats(const SpaceStats& stats);

}  // namespace semperturb

#endif  // SEMPERTURB_EVALUATION_H_
