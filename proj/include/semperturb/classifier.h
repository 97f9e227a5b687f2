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

#ifndef SEMPERTURB_CLASSIFIER_H_
#define SEMPERTURB_CLASSIFIER_H_

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "semperturb/vocab.h"

namespace semperturb {

struct ClassifierDims {
  std::size_t dim = 64;
  std::size_t hidden = 128;
  std::size_t classes = 2;
};

// Bag-of-embeddings classifier:
//   logits = W2 * relu(W1 * mean(E[ids]) + b1) + b2
// E is owned by the model and is the matrix the attack perturbs and projects
// onto.
class ClassifierModel {
 public:
  ClassifierModel(Vocabulary vocab, EmbeddingMatrix embeddings, RowMatrix w1,
                  Eigen::VectorXd b1, RowMatrix w2, Eigen::VectorXd b2,
                  std::uint64_t seed = 0);

  // Uniform init in +-scale/sqrt(fan_in); embedding rows use fan_in = dim.
  static ClassifierModel initialize(Vocabulary vocab, ClassifierDims dims,
                                    double init_scale, std::uint64_t seed);
  static ClassifierModel zeros(Vocabulary vocab, ClassifierDims dims);

  const Vocabulary& vocab() const { return vocab_; }
  const EmbeddingMatrix& embeddings() const { return embeddings_; }
  const RowMatrix& w1() const { return w1_; }
  const Eigen::VectorXd& b1() const { return b1_; }
  const RowMatrix& w2() const { return w2_; }
  const Eigen::VectorXd& b2() const { return b2_; }
  std::uint64_t seed() const { return seed_; }

  EmbeddingMatrix& mutable_embeddings() { return embeddings_; }
  RowMatrix& mutable_w1() { return w1_; }
  Eigen::VectorXd& mutable_b1() { return b1_; }
  RowMatrix& mutable_w2() { return w2_; }
  Eigen::VectorXd& mutable_b2() { return b2_; }

  std::size_t dim() const { return embeddings_.dim(); }
  std::size_t hidden() const { return static_cast<std::size_t>(b1_.size()); }
  std::size_t num_classes() const { return static_cast<std::size_t>(b2_.size()); }

  // Throws kShapeMismatch or kMalformedFile (non-finite parameter).
  void validate() const;

  bool operator==(const ClassifierModel& other) const;

 private:
  Vocabulary vocab_;
  EmbeddingMatrix embeddings_;
  RowMatrix w1_;  // hidden x dim
  Eigen::VectorXd b1_;
  RowMatrix w2_;  // classes x hidden
  Eigen::VectorXd b2_;
  std::uint64_t seed_;
};

struct ForwardTrace {
  RowMatrix inputs;  // n x dim
  Eigen::VectorXd pooled;
  Eigen::VectorXd pre;
  Eigen::VectorXd post;
  Eigen::VectorXd logits;
};

// Throws kEmptyInput, kDimensionMismatch.
ForwardTrace forward_from_embeddings(const ClassifierModel& model,
                                     const RowMatrix& embs);
// Throws kEmptyInput, kIdOutOfRange.
Eigen::VectorXd forward(const ClassifierModel& model,
                        std::span<const TokenId> ids);

// Reverse-mode gradient of <d_logits, logits> w.r.t. every input row.
// Throws kShapeMismatch.
RowMatrix grad_wrt_embeddings(const ClassifierModel& model,
                              const ForwardTrace& trace,
                              const Eigen::VectorXd& d_logits);

// Index of the largest entry; ties go to the lowest index.
std::size_t argmax(const Eigen::VectorXd& values);
std::size_t predict(const ClassifierModel& model, std::span<const TokenId> ids);

Eigen::VectorXd softmax(const Eigen::VectorXd& logits);

struct LabeledSequence {
  std::vector<TokenId> ids;
  std::size_t label = 0;
};

struct TrainConfig {
  double learning_rate = 0.01;
  std::size_t epochs = 20;
  std::size_t batch_size = 16;
  std::uint64_t seed = 1111;
  double init_scale = 1.0;
  bool train_embeddings = true;

  void validate() const;
};

struct TrainResult {
  ClassifierModel model;
  std::vector<double> epoch_loss;  // mean loss over each epoch
  std::vector<double> step_loss;   // mean loss of each mini-batch
  double accuracy = 0.0;           // on the training corpus
};

// Mini-batch cross-entropy with Adam. Throws kLabelOutOfRange.
TrainResult train(ClassifierModel model, std::span<const LabeledSequence> corpus,
                  const TrainConfig& cfg);

struct DistillResult {
  ClassifierModel model;
  std::vector<double> epoch_loss;
  std::vector<double> step_loss;
  double agreement = 0.0;  // argmax match with the teacher on the corpus
};

// Soft cross-entropy -sum p_teacher * log softmax(z_student) at temperature 1.
// Corpus labels are ignored. Throws kMalformedDistribution.
DistillResult distill(ClassifierModel student,
                      std::span<const Eigen::VectorXd> teacher_outputs,
                      std::span<const LabeledSequence> corpus,
                      const TrainConfig& cfg);

double accuracy(const ClassifierModel& model,
                std::span<const LabeledSequence> corpus);

// Little-endian binary: "SEMCLF1", u64 dim/hidden/classes/seed/|V|, the
// vocabulary as (u32 length, bytes) records, then E, W1, b1, W2, b2 as f64.
void save_model(const std::filesystem::path& path, const ClassifierModel& model);
ClassifierModel load_model(const std::filesystem::path& path);

// "<sentence_index>\t<p0>,...,<pC-1>" per line.
void save_teacher_outputs(const std::filesystem::path& path,
                          std::span<const Eigen::VectorXd> outputs);
std::vector<Eigen::VectorXd> load_teacher_outputs(
    const std::filesystem::path& path, std::size_t expected_rows);

}  // namespace semperturb

#endif  // SEMPERTURB_CLASSIFIER_H_
