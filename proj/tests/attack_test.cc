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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "test_util.h"

namespace semperturb {
namespace {

using testing::error_code_of;

Eigen::VectorXd vec(std::initializer_list<double> values) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

TEST(GTargetedTest, Examples) {
  EXPECT_DOUBLE_EQ(g_targeted(vec({2, 5, 1}), 0, 1.0), 3.0);
  EXPECT_DOUBLE_EQ(g_targeted(vec({5, 1, 1}), 0, 1.0), -1.0);
  EXPECT_DOUBLE_EQ(g_targeted(vec({1, 1}), 0, 0.0), 0.0);
}

TEST(GUntargetedTest, Examples) {
  EXPECT_DOUBLE_EQ(g_untargeted(vec({5, 2}), 0, 1.0), 3.0);
  EXPECT_DOUBLE_EQ(g_untargeted(vec({2, 5}), 0, 1.0), -1.0);
}

TEST(GUntargetedTest, TwoClassIdentity) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> normal;
  for (int i = 0; i < 200; ++i) {
    const auto z = vec({normal(rng), normal(rng)});
    const double kappa = std::abs(normal(rng));
    for (std::size_t t = 0; t < 2; ++t) {
      EXPECT_DOUBLE_EQ(g_untargeted(z, t, kappa), g_targeted(z, 1 - t, kappa));
    }
  }
}

TEST(GTest, NeverBelowFloor) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> normal;
  for (int i = 0; i < 1000; ++i) {
    Eigen::VectorXd z(2 + rng() % 5);
    for (auto& x : z) x = 5 * normal(rng);
    const double kappa = std::abs(normal(rng));
    const auto t = static_cast<std::size_t>(rng() % z.size());
    EXPECT_GE(g_targeted(z, t, kappa), -kappa);
    EXPECT_GE(g_untargeted(z, t, kappa), -kappa);
  }
}

TEST(GTest, Errors) {
  EXPECT_EQ(error_code_of([] { g_targeted(vec({1}), 0, 1); }), ErrorCode::kSingleClass);
  EXPECT_EQ(error_code_of([] { g_untargeted(vec({1, 2}), 2, 1); }), ErrorCode::kLabelOutOfRange);
}

TEST(AttackLossTest, ZeroPerturbation) {
  EXPECT_DOUBLE_EQ(attack_loss(RowMatrix::Zero(3, 2), 3.0, 100.0, Norm::kL2), 300.0);
}

TEST(AttackLossTest, HandComputedNorms) {
  RowMatrix e(1, 2);
  e << 3, 4;
  EXPECT_DOUBLE_EQ(attack_loss(e, -1.0, 100.0, Norm::kL2), -95.0);
  EXPECT_DOUBLE_EQ(attack_loss(e, -1.0, 100.0, Norm::kL1), -93.0);
}

TEST(AttackLossTest, NormSpansAllPositions) {
  RowMatrix e(2, 2);
  e << 3, 0, 0, 4;
  EXPECT_DOUBLE_EQ(perturbation_norm(e, Norm::kL2), 5.0);
  EXPECT_DOUBLE_EQ(perturbation_norm(e, Norm::kL1), 7.0);
}

double loss_at(const ClassifierModel& model, const RowMatrix& base, const RowMatrix& e_star,
               std::size_t cls, const AttackConfig& cfg) {
  const auto z = forward_from_embeddings(model, base + e_star).logits;
  const double g = cfg.goal == AttackGoal::kTargeted ? g_targeted(z, cls, cfg.kappa)
                                                    : g_untargeted(z, cls, cfg.kappa);
  return attack_loss(e_star, g, cfg.c, cfg.p);
}

TEST(AttackGradientTest, MatchesCentralDifferences) {
  std::mt19937_64 rng(123);
  std::normal_distribution<double> normal;
  const double h = 1e-6;
  int checked = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const ClassifierDims dims{2 + rng() % 5, 3 + rng() % 8, 2 + rng() % 3};
    const auto model = testing::random_model(12, dims, rng());
    const std::size_t n = 1 + rng() % 4;
    const auto ids = testing::random_ids(rng, n, 12);
    const RowMatrix base = embed_sequence(ids, model.embeddings());
    RowMatrix e_star(n, dims.dim);
    for (Eigen::Index i = 0; i < e_star.size(); ++i) e_star.data()[i] = 0.3 * normal(rng);
    AttackConfig cfg;
    cfg.p = rng() % 2 ? Norm::kL1 : Norm::kL2;
    cfg.kappa = 0.1 * (rng() % 20);
    cfg.goal = rng() % 2 ? AttackGoal::kTargeted : AttackGoal::kUntargeted;
    const std::size_t cls = rng() % dims.classes;

    const auto trace = forward_from_embeddings(model, base + e_star);
    const auto& z = trace.logits;
    // Stay away from kinks: relu, the floor, the inner max, and |x| at 0.
    std::vector<double> others;
    for (Eigen::Index c = 0; c < z.size(); ++c) {
      if (static_cast<std::size_t>(c) != cls) others.push_back(z[c]);
    }
    std::sort(others.rbegin(), others.rend());
    const double inner = cfg.goal == AttackGoal::kTargeted ? others[0] - z[cls] : z[cls] - others[0];
    if ((trace.pre.array().abs() < 1e-4).any() || std::abs(inner + cfg.kappa) < 1e-4 ||
        (others.size() > 1 && others[0] - others[1] < 1e-4) ||
        (cfg.p == Norm::kL1 && (e_star.array().abs() < 1e-4).any())) {
      continue;
    }
    const auto lg = attack_loss_gradient(model, base, e_star, cls, cfg);
    EXPECT_NEAR(lg.loss, loss_at(model, base, e_star, cls, cfg), 1e-9);
    for (Eigen::Index i = 0; i < e_star.size(); ++i) {
      RowMatrix plus = e_star, minus = e_star;
      plus.data()[i] += h;
      minus.data()[i] -= h;
      const double fd = (loss_at(model, base, plus, cls, cfg) -
                         loss_at(model, base, minus, cls, cfg)) / (2 * h);
      const double an = lg.gradient.data()[i];
      EXPECT_LT(std::abs(fd - an) / std::max({std::abs(fd), std::abs(an), 1e-3}), 1e-4)
          << "trial " << trial << " component " << i;
    }
    ++checked;
  }
  EXPECT_GT(checked, 30);
}

TEST(AttackGradientTest, ZeroThroughActiveFloor) {
  const auto model = testing::random_model(6, {3, 4, 2}, 5);
  const std::vector<TokenId> ids = {1, 2};
  const RowMatrix base = embed_sequence(ids, model.embeddings());
  AttackConfig cfg;
  cfg.kappa = 0.0;
  const auto z = forward(model, ids);
  // Untargeted against the class the model does not predict: g sits on its floor.
  const std::size_t loser = argmax(z) == 0 ? 1 : 0;
  const auto lg = attack_loss_gradient(model, base, RowMatrix::Zero(2, 3), loser, cfg);
  EXPECT_EQ(lg.gradient, RowMatrix::Zero(2, 3));
  EXPECT_EQ(lg.g, 0.0);
}

// E: unk 0, a 0.0, b 0.2, z 4.0; z0 = 0.5, z1 = relu(mean + 0.1).
ClassifierModel toy_model() {
  RowMatrix e(4, 1);
  e << 0.0, 0.0, 0.2, 4.0;
  RowMatrix w1(1, 1);
  w1 << 1;
  RowMatrix w2(2, 1);
  w2 << 0, 1;
  return ClassifierModel(Vocabulary::from_tokens({"<unk>", "a", "b", "z"}), EmbeddingMatrix(e),
                         w1, vec({0.1}), w2, vec({0.5, 0.0}));
}

std::vector<SearchSpace> full_spaces(std::span<const TokenId> ids, std::size_t vocab_size) {
  std::vector<TokenId> all;
  for (TokenId t = 1; t < vocab_size; ++t) all.push_back(t);
  std::vector<SearchSpace> spaces;
  for (TokenId id : ids) spaces.emplace_back(id, all);
  return spaces;
}

TEST(RunAttackTest, FindsTheFlippingSubstitution) {
  const auto model = toy_model();
  const std::vector<TokenId> ids = {1, 2};
  ASSERT_EQ(predict(model, ids), 0u);
  // Exhaustive single substitutions: only "z" flips, at either position.
  int flips = 0;
  for (std::size_t pos = 0; pos < 2; ++pos) {
    for (TokenId t = 1; t < 4; ++t) {
      auto x = ids;
      x[pos] = t;
      if (predict(model, x) != 0) {
        ++flips;
        EXPECT_EQ(t, 3u);
      }
    }
  }
  ASSERT_EQ(flips, 2);

  const auto spaces = full_spaces(ids, 4);
  const auto result = run_attack(model, ids, 0, spaces, {}, AttackConfig{});
  EXPECT_TRUE(result.success);
  EXPECT_NE(predict(model, result.adversarial_ids), 0u);
  ASSERT_FALSE(result.perturbed_positions.empty());
  EXPECT_NE(std::find(result.adversarial_ids.begin(), result.adversarial_ids.end(), 3u),
            result.adversarial_ids.end());
  EXPECT_EQ(result.iterations_used, 100u);
  EXPECT_EQ(result.loss_trace.size(), 100u);
}

TEST(RunAttackTest, EarlyExitStopsAtFirstSuccess) {
  const auto model = toy_model();
  const std::vector<TokenId> ids = {1, 2};
  AttackConfig cfg;
  cfg.early_exit = true;
  const auto result = run_attack(model, ids, 0, full_spaces(ids, 4), {}, cfg);
  EXPECT_TRUE(result.success);
  EXPECT_LT(result.iterations_used, 100u);
  EXPECT_EQ(result.loss_trace.size(), result.iterations_used);
}

TEST(RunAttackTest, TargetedAttack) {
  const auto model = toy_model();
  const std::vector<TokenId> ids = {1, 2};
  AttackConfig cfg;
  cfg.goal = AttackGoal::kTargeted;
  cfg.target_class = 1;
  const auto result = run_attack(model, ids, 0, full_spaces(ids, 4), {}, cfg);
  EXPECT_TRUE(result.success);
  EXPECT_EQ(predict(model, result.adversarial_ids), 1u);
}

TEST(RunAttackTest, AlreadyAdversarialInput) {
  const auto model = toy_model();
  const std::vector<TokenId> ids = {3, 3};
  const auto result = run_attack(model, ids, 0, full_spaces(ids, 4), {}, AttackConfig{});
  EXPECT_TRUE(result.success);
  EXPECT_EQ(result.iterations_used, 0u);
  EXPECT_TRUE(result.perturbed_positions.empty());
  EXPECT_EQ(result.adversarial_ids, ids);
}

TEST(RunAttackTest, SingletonSpacesKeepTheInput) {
  const auto model = toy_model();
  const std::vector<TokenId> ids = {1, 2};
  const std::vector<SearchSpace> spaces = {SearchSpace(1), SearchSpace(2)};
  const auto result = run_attack(model, ids, 0, spaces, {}, AttackConfig{});
  EXPECT_FALSE(result.success);
  EXPECT_EQ(result.adversarial_ids, ids);
  EXPECT_TRUE(result.perturbed_positions.empty());
}

TEST(RunAttackTest, MaskedPositionsStayPut) {
  const auto model = toy_model();
  const std::vector<TokenId> ids = {1, 2};
  const std::vector<SearchSpace> spaces = {SearchSpace(1), SearchSpace(2, {1, 3})};
  const auto result = run_attack(model, ids, 0, spaces, {false, true}, AttackConfig{});
  EXPECT_TRUE(result.success);
  EXPECT_EQ(result.adversarial_ids[0], 1u);
  EXPECT_EQ(result.adversarial_ids[1], 3u);
}

TEST(RunAttackTest, PreconditionErrors) {
  const auto model = toy_model();
  const std::vector<TokenId> ids = {1, 2};
  const auto spaces = full_spaces(ids, 4);
  AttackConfig targeted;
  targeted.goal = AttackGoal::kTargeted;
  targeted.target_class = 0;
  EXPECT_EQ(error_code_of([&] { run_attack(model, ids, 0, spaces, {}, targeted); }),
            ErrorCode::kTargetEqualsTruth);
  EXPECT_EQ(error_code_of([&] {
              run_attack(model, ids, 0, std::span(spaces).first(1), {}, AttackConfig{});
            }),
            ErrorCode::kShapeMismatch);
  EXPECT_EQ(error_code_of([&] { run_attack(model, ids, 0, spaces, {false, true}, AttackConfig{}); }),
            ErrorCode::kMaskSpaceConflict);
  const std::vector<SearchSpace> wrong = {SearchSpace(2), SearchSpace(2)};
  EXPECT_EQ(error_code_of([&] { run_attack(model, ids, 0, wrong, {}, AttackConfig{}); }),
            ErrorCode::kMaskSpaceConflict);
  EXPECT_EQ(error_code_of([&] { run_attack(model, ids, 2, spaces, {}, AttackConfig{}); }),
            ErrorCode::kLabelOutOfRange);
}

TEST(AttackConfigTest, Validation) {
  AttackConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  EXPECT_EQ(cfg.c, 100.0);
  EXPECT_EQ(cfg.kappa, 1.0);
  EXPECT_EQ(cfg.max_iterations, 100u);
  EXPECT_EQ(cfg.p, Norm::kL2);
  cfg.kappa = -0.5;
  EXPECT_EQ(error_code_of([&] { cfg.validate(); }), ErrorCode::kConfig);
  cfg = AttackConfig{};
  cfg.max_iterations = 0;
  EXPECT_EQ(error_code_of([&] { cfg.validate(); }), ErrorCode::kConfig);
  cfg = AttackConfig{};
  cfg.goal = AttackGoal::kTargeted;
  EXPECT_EQ(error_code_of([&] { cfg.validate(); }), ErrorCode::kConfig);
}

// Random models, random spaces and masks: every output obeys the contract.
TEST(RunAttackTest, FeasibilityAndDeterminism) {
  std::mt19937_64 rng(2024);
  const std::size_t vocab_size = 25;
  for (int trial = 0; trial < 40; ++trial) {
    const auto model = testing::random_model(vocab_size, {4, 8, 2 + rng() % 2}, rng());
    const std::size_t n = 2 + rng() % 5;
    const auto ids = testing::random_ids(rng, n, vocab_size);
    std::vector<bool> mask(n);
    std::vector<SearchSpace> spaces;
    for (std::size_t i = 0; i < n; ++i) {
      mask[i] = rng() % 4 != 0;
      std::vector<TokenId> cands;
      if (mask[i]) {
        for (int c = 0; c < 4; ++c) cands.push_back(static_cast<TokenId>(1 + rng() % (vocab_size - 1)));
      }
      spaces.emplace_back(ids[i], cands);
    }
    AttackConfig cfg;
    cfg.max_iterations = 30;
    cfg.p = rng() % 2 ? Norm::kL1 : Norm::kL2;
    const std::size_t truth = predict(model, ids);
    const auto result = run_attack(model, ids, truth, spaces, mask, cfg);
    ASSERT_EQ(result.adversarial_ids.size(), n);
    std::vector<std::size_t> changed;
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_TRUE(spaces[i].contains(result.adversarial_ids[i]));
      if (!mask[i]) {
        EXPECT_EQ(result.adversarial_ids[i], ids[i]);
      }
      if (result.adversarial_ids[i] != ids[i]) changed.push_back(i);
    }
    EXPECT_EQ(result.perturbed_positions, changed);
    EXPECT_EQ(result.success, predict(model, result.adversarial_ids) != truth);
    for (double loss : result.loss_trace) EXPECT_GE(loss, -cfg.c * cfg.kappa);
    EXPECT_TRUE(result == run_attack(model, ids, truth, spaces, mask, cfg));
  }
}

TEST(RunAttackTest, ZeroPerturbationProjectsToInput) {
  // One step with a vanishing rate leaves e' at the original rows.
  const auto model = testing::random_model(30, {6, 8, 2}, 8);
  std::mt19937_64 rng(9);
  const auto ids = testing::random_ids(rng, 6, 30);
  AttackConfig cfg;
  cfg.max_iterations = 1;
  cfg.step_size = 1e-300;
  const std::size_t truth = predict(model, ids);
  const auto result = run_attack(model, ids, truth, full_spaces(ids, 30), {}, cfg);
  EXPECT_EQ(result.adversarial_ids, ids);
}

}  // namespace
}  // namespace semperturb
