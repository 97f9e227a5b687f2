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

#include "semperturb/attack.h"

#include <cmath>
#include <limits>

#include "semperturb/adam.h"
#include "semperturb/error.h"

namespace semperturb {

void AttackConfig::validate() const {
  if (!(c > 0.0) || !(kappa >= 0.0) || max_iterations < 1 || !(step_size > 0.0)) {
    throw Error(ErrorCode::kConfig,
                "attack needs c > 0, kappa >= 0, m >= 1 and step size > 0");
  }
  if (p != Norm::kL1 && p != Norm::kL2) {
    throw Error(ErrorCode::kConfig, "norm order must be 1 or 2");
  }
  if (goal == AttackGoal::kTargeted && !target_class) {
    throw Error(ErrorCode::kConfig, "targeted attack without a target class");
  }
}

namespace {

// Index of the largest logit other than `skip`, lowest index on ties.
std::size_t best_other(const Eigen::VectorXd& z, std::size_t skip) {
  std::size_t best = skip == 0 ? 1 : 0;
  for (std::size_t i = 0; i < static_cast<std::size_t>(z.size()); ++i) {
    if (i != skip && z[static_cast<Eigen::Index>(i)] > z[static_cast<Eigen::Index>(best)]) {
      best = i;
    }
  }
  return best;
}

void check_class(const Eigen::VectorXd& logits, std::size_t cls) {
  if (logits.size() < 2) {
    throw Error(ErrorCode::kSingleClass, "attack objective needs at least 2 classes");
  }
  if (cls >= static_cast<std::size_t>(logits.size())) {
    throw Error(ErrorCode::kLabelOutOfRange, "class " + std::to_string(cls));
  }
}

}  // namespace

double g_targeted(const Eigen::VectorXd& logits, std::size_t target, double kappa) {
  check_class(logits, target);
  const auto t = static_cast<Eigen::Index>(target);
  const auto j = static_cast<Eigen::Index>(best_other(logits, target));
  return std::max(logits[j] - logits[t], -kappa);
}

double g_untargeted(const Eigen::VectorXd& logits, std::size_t truth, double kappa) {
  check_class(logits, truth);
  const auto t = static_cast<Eigen::Index>(truth);
  const auto j = static_cast<Eigen::Index>(best_other(logits, truth));
  return std::max(logits[t] - logits[j], -kappa);
}

double perturbation_norm(const RowMatrix& e_star, Norm p) {
  return p == Norm::kL1 ? e_star.cwiseAbs().sum() : e_star.norm();
}

double attack_loss(const RowMatrix& e_star, double g_value, double c, Norm p) {
  return perturbation_norm(e_star, p) + c * g_value;
}

LossGradient attack_loss_gradient(const ClassifierModel& model,
                                  const RowMatrix& base, const RowMatrix& e_star,
                                  std::size_t cls, const AttackConfig& cfg) {
  if (base.rows() != e_star.rows() || base.cols() != e_star.cols()) {
    throw Error(ErrorCode::kShapeMismatch, "perturbation shape differs from input");
  }
  const ForwardTrace trace = forward_from_embeddings(model, base + e_star);
  const Eigen::VectorXd& z = trace.logits;
  LossGradient out;
  out.logits = z;
  out.g = cfg.goal == AttackGoal::kTargeted ? g_targeted(z, cls, cfg.kappa)
                                            : g_untargeted(z, cls, cfg.kappa);
  out.loss = attack_loss(e_star, out.g, cfg.c, cfg.p);

  const auto t = static_cast<Eigen::Index>(cls);
  const auto j = static_cast<Eigen::Index>(best_other(z, cls));
  const double inner = cfg.goal == AttackGoal::kTargeted ? z[j] - z[t] : z[t] - z[j];
  if (inner > -cfg.kappa) {
    Eigen::VectorXd d_logits = Eigen::VectorXd::Zero(z.size());
    const double sign = cfg.goal == AttackGoal::kTargeted ? 1.0 : -1.0;
    d_logits[j] = sign * cfg.c;
    d_logits[t] = -sign * cfg.c;
    out.gradient = grad_wrt_embeddings(model, trace, d_logits);
  } else {
    out.gradient = RowMatrix::Zero(e_star.rows(), e_star.cols());
  }

  if (cfg.p == Norm::kL1) {
    out.gradient += e_star.unaryExpr([](double v) {
      return static_cast<double>((v > 0.0) - (v < 0.0));
    });
  } else {
    const double norm = e_star.norm();
    if (norm > 0.0) out.gradient += e_star / norm;
  }
  return out;
}

bool AttackResult::operator==(const AttackResult& other) const {
  return adversarial_ids == other.adversarial_ids && success == other.success &&
         perturbed_positions == other.perturbed_positions &&
         iterations_used == other.iterations_used &&
         loss_trace == other.loss_trace && final_logits == other.final_logits;
}

AttackResult run_attack(const ClassifierModel& model,
                        std::span<const TokenId> ids, std::size_t truth,
                        std::span<const SearchSpace> spaces,
                        const std::vector<bool>& attack_mask,
                        const AttackConfig& cfg) {
  cfg.validate();
  const std::size_t n = ids.size();
  if (n == 0) throw Error(ErrorCode::kEmptyInput, "empty input sequence");
  if (spaces.size() != n || (!attack_mask.empty() && attack_mask.size() != n)) {
    throw Error(ErrorCode::kShapeMismatch,
                "need one search space and mask flag per token");
  }
  if (truth >= model.num_classes()) {
    throw Error(ErrorCode::kLabelOutOfRange, "true class " + std::to_string(truth));
  }
  std::size_t cls = truth;
  if (cfg.goal == AttackGoal::kTargeted) {
    cls = *cfg.target_class;
    if (cls >= model.num_classes()) {
      throw Error(ErrorCode::kLabelOutOfRange, "target class " + std::to_string(cls));
    }
    if (cls == truth) {
      throw Error(ErrorCode::kTargetEqualsTruth,
                  "target class equals the true class " + std::to_string(truth));
    }
  }

  std::vector<bool> active(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    const bool attackable = attack_mask.empty() || attack_mask[i];
    if (spaces[i].original_id() != ids[i]) {
      throw Error(ErrorCode::kMaskSpaceConflict,
                  "search space at position " + std::to_string(i) +
                      " belongs to a different token");
    }
    if (!attackable && !spaces[i].is_singleton()) {
      throw Error(ErrorCode::kMaskSpaceConflict,
                  "masked position " + std::to_string(i) + " has candidates");
    }
    spaces[i].validate(model.vocab().size());
    active[i] = attackable && !spaces[i].is_singleton();
  }

  auto succeeded = [&](std::size_t predicted) {
    return cfg.goal == AttackGoal::kTargeted ? predicted == cls : predicted != truth;
  };

  AttackResult result;
  result.adversarial_ids.assign(ids.begin(), ids.end());
  result.final_logits = forward(model, ids);
  if (succeeded(argmax(result.final_logits))) {
    result.success = true;
    return result;
  }

  const RowMatrix base = embed_sequence(ids, model.embeddings());
  const auto d = base.cols();
  RowMatrix e_star = RowMatrix::Zero(base.rows(), d);
  AdamState adam(static_cast<std::size_t>(e_star.size()),
                 AdamOptions{.learning_rate = cfg.step_size});

  std::vector<TokenId> current(ids.begin(), ids.end());
  std::optional<AttackResult> best;
  double best_loss = std::numeric_limits<double>::infinity();

  for (std::size_t iter = 0; iter < cfg.max_iterations; ++iter) {
    // Phase I: one Adam step on the continuous perturbation.
    LossGradient lg = attack_loss_gradient(model, base, e_star, cls, cfg);
    result.loss_trace.push_back(lg.loss);
    for (std::size_t i = 0; i < n; ++i) {
      if (!active[i]) lg.gradient.row(static_cast<Eigen::Index>(i)).setZero();
    }
    adam.step({e_star.data(), static_cast<std::size_t>(e_star.size())},
              {lg.gradient.data(), static_cast<std::size_t>(lg.gradient.size())});

    // Phase II: snap every attackable position into its search space.
    for (std::size_t i = 0; i < n; ++i) {
      if (!active[i]) continue;
      const Eigen::RowVectorXd perturbed =
          base.row(static_cast<Eigen::Index>(i)) + e_star.row(static_cast<Eigen::Index>(i));
      current[i] = nearest_token_in_space(
          {perturbed.data(), static_cast<std::size_t>(perturbed.size())},
          spaces[i], model.embeddings(), cfg.p);
    }
    result.iterations_used = iter + 1;

    const Eigen::VectorXd logits = forward(model, current);
    if (!succeeded(argmax(logits))) continue;
    std::vector<std::size_t> changed;
    for (std::size_t i = 0; i < n; ++i) {
      if (current[i] != ids[i]) changed.push_back(i);
    }
    const bool better = !best || changed.size() < best->perturbed_positions.size() ||
                        (changed.size() == best->perturbed_positions.size() &&
                         lg.loss < best_loss);
    if (better) {
      best = AttackResult{current, true, std::move(changed), 0, {}, logits};
      best_loss = lg.loss;
    }
    if (cfg.early_exit) break;
  }

  if (best) {
    best->iterations_used = result.iterations_used;
    best->loss_trace = std::move(result.loss_trace);
    return std::move(*best);
  }
  result.adversarial_ids = current;
  for (std::size_t i = 0; i < n; ++i) {
    if (current[i] != ids[i]) result.perturbed_positions.push_back(i);
  }
  result.final_logits = forward(model, current);
  return result;
}

}  // namespace semperturb
