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

#ifndef SEMPERTURB_ATTACK_H_
#define SEMPERTURB_ATTACK_H_

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "semperturb/classifier.h"
#include "semperturb/neighbors.h"
#include "semperturb/search_space.h"

namespace semperturb {

enum class AttackGoal { kUntargeted, kTargeted };

struct AttackConfig {
  double c = 100.0;
  double kappa = 1.0;
  std::size_t max_iterations = 100;  // m
  Norm p = Norm::kL2;
  double step_size = 0.1;  // Adam base rate
  AttackGoal goal = AttackGoal::kUntargeted;
  std::optional<std::size_t> target_class;
  bool early_exit = false;
  // The optimisation starts from zero perturbation and has no random draws;
  // the seed is carried so campaign records are self-describing.
  std::uint64_t seed = 1111;

  // Throws kConfig on c <= 0, kappa < 0, m < 1, step_size <= 0, or a targeted
  // goal without a target.
  void validate() const;
};

// max(max_{i != t} z_i - z_t, -kappa). Throws kSingleClass, kLabelOutOfRange.
double g_targeted(const Eigen::VectorXd& logits, std::size_t target, double kappa);
// max(z_t - max_{i != t} z_i, -kappa) with t the true class.
double g_untargeted(const Eigen::VectorXd& logits, std::size_t truth, double kappa);

// p-norm of all position perturbations taken together.
double perturbation_norm(const RowMatrix& e_star, Norm p);
// ||e*||_p + c * g.
double attack_loss(const RowMatrix& e_star, double g_value, double c, Norm p);

struct LossGradient {
  double loss = 0.0;
  double g = 0.0;
  Eigen::VectorXd logits;
  RowMatrix gradient;  // dL/de*, n x dim
};

// Evaluates the loss on the continuous input base + e_star and its gradient
// w.r.t. e_star. `cls` is the target class (targeted) or the true class.
// Subgradients: 0 for |.| at zero components, 0 for the l2 norm at the
// origin, and 0 through g when the -kappa floor is active.
LossGradient attack_loss_gradient(const ClassifierModel& model,
                                  const RowMatrix& base, const RowMatrix& e_star,
                                  std::size_t cls, const AttackConfig& cfg);

struct AttackResult {
  std::vector<TokenId> adversarial_ids;
  bool success = false;
  std::vector<std::size_t> perturbed_positions;
  std::size_t iterations_used = 0;
  std::vector<double> loss_trace;
  Eigen::VectorXd final_logits;

  bool operator==(const AttackResult& other) const;
};

// Optimises an additive embedding perturbation with Adam and, after every
// step, snaps each attackable position to the nearest token of its search
// space. Positions that are masked off or have a singleton space keep a zero
// perturbation. An empty mask means every position is attackable.
//
// Returns the successful candidate with the fewest perturbed positions (then
// lowest loss) seen over all iterations, or the last projection if none
// succeeded. Throws kShapeMismatch, kMaskSpaceConflict, kTargetEqualsTruth,
// kLabelOutOfRange.
AttackResult run_attack(const ClassifierModel& model,
                        std::span<const TokenId> ids, std::size_t truth,
                        std::span<const SearchSpace> spaces,
                        const std::vector<bool>& attack_mask,
                        const AttackConfig& cfg);

}  // namespace semperturb

#endif  // SEMPERTURB_ATTACK_H_
