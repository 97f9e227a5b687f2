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

#include "semperturb/classifier.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <random>

#include "semperturb/adam.h"
#include "semperturb/error.h"
#include "semperturb/text_util.h"

namespace semperturb {

ClassifierModel::ClassifierModel(Vocabulary vocab, EmbeddingMatrix embeddings,
                                 RowMatrix w1, Eigen::VectorXd b1, RowMatrix w2,
                                 Eigen::VectorXd b2, std::uint64_t seed)
    : vocab_(std::move(vocab)),
      embeddings_(std::move(embeddings)),
      w1_(std::move(w1)),
      b1_(std::move(b1)),
      w2_(std::move(w2)),
      b2_(std::move(b2)),
      seed_(seed) {
  validate();
}

void ClassifierModel::validate() const {
  const auto d = static_cast<Eigen::Index>(dim());
  const auto h = b1_.size();
  const auto c = b2_.size();
  if (embeddings_.rows() != vocab_.size() || w1_.rows() != h ||
      w1_.cols() != d || w2_.rows() != c || w2_.cols() != h || h == 0) {
    throw Error(ErrorCode::kShapeMismatch, "classifier parameter shapes disagree");
  }
  if (c < 1) throw Error(ErrorCode::kShapeMismatch, "classifier has no classes");
  if (!w1_.allFinite() || !b1_.allFinite() || !w2_.allFinite() ||
      !b2_.allFinite() || !embeddings_.matrix().allFinite()) {
    throw Error(ErrorCode::kMalformedFile, "non-finite classifier parameter");
  }
}

bool ClassifierModel::operator==(const ClassifierModel& other) const {
  return vocab_ == other.vocab_ && seed_ == other.seed_ &&
         embeddings_.matrix() == other.embeddings_.matrix() &&
         w1_ == other.w1_ && b1_ == other.b1_ && w2_ == other.w2_ &&
         b2_ == other.b2_;
}

ClassifierModel ClassifierModel::initialize(Vocabulary vocab,
                                            ClassifierDims dims,
                                            double init_scale,
                                            std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto fill = [&rng, init_scale](auto& m, std::size_t fan_in) {
    const double bound = init_scale / std::sqrt(static_cast<double>(fan_in));
    std::uniform_real_distribution<double> dist(-bound, bound);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = dist(rng);
  };
  const auto v = static_cast<Eigen::Index>(vocab.size());
  const auto d = static_cast<Eigen::Index>(dims.dim);
  const auto h = static_cast<Eigen::Index>(dims.hidden);
  const auto c = static_cast<Eigen::Index>(dims.classes);
  RowMatrix e(v, d), w1(h, d), w2(c, h);
  Eigen::VectorXd b1(h), b2(c);
  fill(e, dims.dim);
  fill(w1, dims.dim);
  fill(b1, dims.dim);
  fill(w2, dims.hidden);
  fill(b2, dims.hidden);
  return ClassifierModel(std::move(vocab), EmbeddingMatrix(std::move(e)),
                         std::move(w1), std::move(b1), std::move(w2),
                         std::move(b2), seed);
}

ClassifierModel ClassifierModel::zeros(Vocabulary vocab, ClassifierDims dims) {
  const auto v = static_cast<Eigen::Index>(vocab.size());
  const auto d = static_cast<Eigen::Index>(dims.dim);
  const auto h = static_cast<Eigen::Index>(dims.hidden);
  const auto c = static_cast<Eigen::Index>(dims.classes);
  return ClassifierModel(std::move(vocab), EmbeddingMatrix(RowMatrix::Zero(v, d)),
                         RowMatrix::Zero(h, d), Eigen::VectorXd::Zero(h),
                         RowMatrix::Zero(c, h), Eigen::VectorXd::Zero(c));
}

ForwardTrace forward_from_embeddings(const ClassifierModel& model,
                                     const RowMatrix& embs) {
  if (embs.rows() == 0) throw Error(ErrorCode::kEmptyInput, "empty input sequence");
  if (static_cast<std::size_t>(embs.cols()) != model.dim()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "input embedding dim " + std::to_string(embs.cols()) +
                    " vs model dim " + std::to_string(model.dim()));
  }
  ForwardTrace t;
  t.inputs = embs;
  t.pooled = embs.colwise().sum().transpose() / static_cast<double>(embs.rows());
  t.pre = model.w1() * t.pooled + model.b1();
  t.post = t.pre.cwiseMax(0.0);
  t.logits = model.w2() * t.post + model.b2();
  return t;
}

Eigen::VectorXd forward(const ClassifierModel& model,
                        std::span<const TokenId> ids) {
  if (ids.empty()) throw Error(ErrorCode::kEmptyInput, "empty input sequence");
  return forward_from_embeddings(model, embed_sequence(ids, model.embeddings()))
      .logits;
}

RowMatrix grad_wrt_embeddings(const ClassifierModel& model,
                              const ForwardTrace& trace,
                              const Eigen::VectorXd& d_logits) {
  if (static_cast<std::size_t>(d_logits.size()) != model.num_classes() ||
      static_cast<std::size_t>(trace.pre.size()) != model.hidden() ||
      static_cast<std::size_t>(trace.inputs.cols()) != model.dim() ||
      trace.inputs.rows() == 0) {
    throw Error(ErrorCode::kShapeMismatch, "trace does not match model");
  }
  const Eigen::VectorXd d_post = model.w2().transpose() * d_logits;
  const Eigen::VectorXd d_pre =
      (trace.pre.array() > 0.0).select(d_post, Eigen::VectorXd::Zero(d_post.size()));
  const Eigen::VectorXd d_pooled = model.w1().transpose() * d_pre;
  const auto n = trace.inputs.rows();
  RowMatrix grads(n, trace.inputs.cols());
  const Eigen::RowVectorXd per_row = d_pooled.transpose() / static_cast<double>(n);
  for (Eigen::Index i = 0; i < n; ++i) grads.row(i) = per_row;
  return grads;
}

std::size_t argmax(const Eigen::VectorXd& values) {
  std::size_t best = 0;
  for (Eigen::Index i = 1; i < values.size(); ++i) {
    if (values[i] > values[static_cast<Eigen::Index>(best)]) {
      best = static_cast<std::size_t>(i);
    }
  }
  return best;
}

std::size_t predict(const ClassifierModel& model, std::span<const TokenId> ids) {
  return argmax(forward(model, ids));
}

Eigen::VectorXd softmax(const Eigen::VectorXd& logits) {
  const double shift = logits.maxCoeff();
  Eigen::VectorXd e = (logits.array() - shift).exp();
  return e / e.sum();
}

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0) || batch_size == 0 || !(init_scale > 0.0)) {
    throw Error(ErrorCode::kConfig,
                "training needs positive learning rate, batch size and init scale");
  }
}

double accuracy(const ClassifierModel& model,
                std::span<const LabeledSequence> corpus) {
  if (corpus.empty()) return 0.0;
  std::size_t correct = 0;
  for (const auto& s : corpus) correct += predict(model, s.ids) == s.label;
  return static_cast<double>(correct) / static_cast<double>(corpus.size());
}

namespace {

struct FitOutput {
  std::vector<double> epoch_loss;
  std::vector<double> step_loss;
};

// Shared by supervised training (one-hot targets) and distillation, so the two
// agree bit-for-bit when the teacher is one-hot.
FitOutput fit(ClassifierModel& model, std::span<const Eigen::VectorXd> targets,
              std::span<const LabeledSequence> corpus, const TrainConfig& cfg) {
  cfg.validate();
  FitOutput out;
  if (cfg.epochs == 0 || corpus.empty()) return out;

  const AdamOptions opts{.learning_rate = cfg.learning_rate};
  auto& e = model.mutable_embeddings().mutable_matrix();
  auto& w1 = model.mutable_w1();
  auto& b1 = model.mutable_b1();
  auto& w2 = model.mutable_w2();
  auto& b2 = model.mutable_b2();
  AdamState adam_e(static_cast<std::size_t>(e.size()), opts);
  AdamState adam_w1(static_cast<std::size_t>(w1.size()), opts);
  AdamState adam_b1(static_cast<std::size_t>(b1.size()), opts);
  AdamState adam_w2(static_cast<std::size_t>(w2.size()), opts);
  AdamState adam_b2(static_cast<std::size_t>(b2.size()), opts);

  RowMatrix g_e = RowMatrix::Zero(e.rows(), e.cols());
  RowMatrix g_w1(w1.rows(), w1.cols());
  Eigen::VectorXd g_b1(b1.size());
  RowMatrix g_w2(w2.rows(), w2.cols());
  Eigen::VectorXd g_b2(b2.size());

  std::vector<std::size_t> order(corpus.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(cfg.seed);

  auto as_span = [](auto& m) {
    return std::span<double>(m.data(), static_cast<std::size_t>(m.size()));
  };
  auto as_cspan = [](const auto& m) {
    return std::span<const double>(m.data(), static_cast<std::size_t>(m.size()));
  };

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[rng() % i]);
    }
    double epoch_sum = 0.0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t stop = std::min(order.size(), start + cfg.batch_size);
      const double scale = 1.0 / static_cast<double>(stop - start);
      g_w1.setZero();
      g_b1.setZero();
      g_w2.setZero();
      g_b2.setZero();
      if (cfg.train_embeddings) g_e.setZero();
      double batch_sum = 0.0;
      for (std::size_t b = start; b < stop; ++b) {
        const auto& sample = corpus[order[b]];
        const auto& target = targets[order[b]];
        const auto trace =
            forward_from_embeddings(model, embed_sequence(sample.ids, model.embeddings()));
        const double shift = trace.logits.maxCoeff();
        const double lse =
            shift + std::log((trace.logits.array() - shift).exp().sum());
        const Eigen::VectorXd log_probs = trace.logits.array() - lse;
        batch_sum += -target.dot(log_probs);

        const Eigen::VectorXd d_logits = (log_probs.array().exp().matrix() - target) * scale;
        g_w2.noalias() += d_logits * trace.post.transpose();
        g_b2 += d_logits;
        const Eigen::VectorXd d_post = w2.transpose() * d_logits;
        const Eigen::VectorXd d_pre =
            (trace.pre.array() > 0.0).select(d_post, Eigen::VectorXd::Zero(d_post.size()));
        g_w1.noalias() += d_pre * trace.pooled.transpose();
        g_b1 += d_pre;
        if (cfg.train_embeddings) {
          const Eigen::RowVectorXd d_row =
              (w1.transpose() * d_pre).transpose() /
              static_cast<double>(sample.ids.size());
          for (TokenId id : sample.ids) g_e.row(id) += d_row;
        }
      }
      out.step_loss.push_back(batch_sum * scale);
      epoch_sum += batch_sum;

      adam_w1.step(as_span(w1), as_cspan(g_w1));
      adam_b1.step(as_span(b1), as_cspan(g_b1));
      adam_w2.step(as_span(w2), as_cspan(g_w2));
      adam_b2.step(as_span(b2), as_cspan(g_b2));
      if (cfg.train_embeddings) adam_e.step(as_span(e), as_cspan(g_e));
    }
    out.epoch_loss.push_back(epoch_sum / static_cast<double>(order.size()));
  }
  model.validate();
  return out;
}

void check_sequences(const ClassifierModel& model,
                     std::span<const LabeledSequence> corpus, bool check_labels) {
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (corpus[i].ids.empty()) {
      throw Error(ErrorCode::kEmptyInput, "sentence " + std::to_string(i) + " is empty");
    }
    for (TokenId id : corpus[i].ids) {
      if (id >= model.vocab().size()) {
        throw Error(ErrorCode::kIdOutOfRange, "sentence " + std::to_string(i));
      }
    }
    if (check_labels && corpus[i].label >= model.num_classes()) {
      throw Error(ErrorCode::kLabelOutOfRange,
                  "sentence " + std::to_string(i) + " has label " +
                      std::to_string(corpus[i].label));
    }
  }
}

}  // namespace

TrainResult train(ClassifierModel model, std::span<const LabeledSequence> corpus,
                  const TrainConfig& cfg) {
  check_sequences(model, corpus, true);
  std::vector<Eigen::VectorXd> targets;
  targets.reserve(corpus.size());
  for (const auto& s : corpus) {
    Eigen::VectorXd t = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(model.num_classes()));
    t[static_cast<Eigen::Index>(s.label)] = 1.0;
    targets.push_back(std::move(t));
  }
  auto fitted = fit(model, targets, corpus, cfg);
  const double acc = accuracy(model, corpus);
  return {std::move(model), std::move(fitted.epoch_loss),
          std::move(fitted.step_loss), acc};
}

DistillResult distill(ClassifierModel student,
                      std::span<const Eigen::VectorXd> teacher_outputs,
                      std::span<const LabeledSequence> corpus,
                      const TrainConfig& cfg) {
  if (teacher_outputs.size() != corpus.size()) {
    throw Error(ErrorCode::kMalformedDistribution,
                "teacher outputs for " + std::to_string(teacher_outputs.size()) +
                    " sentences, corpus has " + std::to_string(corpus.size()));
  }
  for (std::size_t i = 0; i < teacher_outputs.size(); ++i) {
    const auto& p = teacher_outputs[i];
    if (static_cast<std::size_t>(p.size()) != student.num_classes() ||
        !p.allFinite() || p.minCoeff() < 0.0 || std::abs(p.sum() - 1.0) > 1e-6) {
      throw Error(ErrorCode::kMalformedDistribution,
                  "teacher output " + std::to_string(i) +
                      " is not a probability vector over " +
                      std::to_string(student.num_classes()) + " classes");
    }
  }
  check_sequences(student, corpus, false);
  auto fitted = fit(student, teacher_outputs, corpus, cfg);
  std::size_t agree = 0;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    agree += predict(student, corpus[i].ids) == argmax(teacher_outputs[i]);
  }
  const double agreement =
      corpus.empty() ? 0.0 : static_cast<double>(agree) / static_cast<double>(corpus.size());
  return {std::move(student), std::move(fitted.epoch_loss),
          std::move(fitted.step_loss), agreement};
}

namespace {

constexpr char kMagic[] = "SEMCLF1";
constexpr std::size_t kMagicLen = 7;

template <typename T>
void write_le(std::ostream& out, T value) {
  static_assert(std::is_trivially_copyable_v<T>);
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    std::reverse(bytes, bytes + sizeof(T));
  }
  out.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <typename T>
T read_le(std::istream& in) {
  unsigned char bytes[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(bytes), sizeof(T))) {
    throw Error(ErrorCode::kMalformedFile, "model file truncated");
  }
  if constexpr (std::endian::native == std::endian::big) {
    std::reverse(bytes, bytes + sizeof(T));
  }
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

template <typename M>
void write_block(std::ostream& out, const M& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i) write_le<double>(out, m.data()[i]);
}

template <typename M>
void read_block(std::istream& in, M& m) {
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = read_le<double>(in);
}

}  // namespace

void save_model(const std::filesystem::path& path, const ClassifierModel& model) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out.write(kMagic, kMagicLen);
  write_le<std::uint64_t>(out, model.dim());
  write_le<std::uint64_t>(out, model.hidden());
  write_le<std::uint64_t>(out, model.num_classes());
  write_le<std::uint64_t>(out, model.seed());
  write_le<std::uint64_t>(out, model.vocab().size());
  for (const auto& tok : model.vocab().tokens()) {
    write_le<std::uint32_t>(out, static_cast<std::uint32_t>(tok.size()));
    out.write(tok.data(), static_cast<std::streamsize>(tok.size()));
  }
  write_block(out, model.embeddings().matrix());
  write_block(out, model.w1());
  write_block(out, model.b1());
  write_block(out, model.w2());
  write_block(out, model.b2());
  if (!out) throw Error(ErrorCode::kIo, "failed writing " + path.string());
}

ClassifierModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  char magic[kMagicLen];
  if (!in.read(magic, kMagicLen) || std::memcmp(magic, kMagic, kMagicLen) != 0) {
    throw Error(ErrorCode::kMalformedFile, path.string() + ": not a SEMCLF1 model");
  }
  constexpr std::uint64_t kLimit = 1ULL << 26;
  const auto d = read_le<std::uint64_t>(in);
  const auto h = read_le<std::uint64_t>(in);
  const auto c = read_le<std::uint64_t>(in);
  const auto seed = read_le<std::uint64_t>(in);
  const auto v = read_le<std::uint64_t>(in);
  if (d == 0 || h == 0 || c == 0 || v == 0 || d > kLimit || h > kLimit ||
      c > kLimit || v > kLimit) {
    throw Error(ErrorCode::kMalformedFile, path.string() + ": bad header");
  }
  std::vector<std::string> tokens(v);
  for (auto& tok : tokens) {
    const auto len = read_le<std::uint32_t>(in);
    if (len == 0 || len > 4096) {
      throw Error(ErrorCode::kMalformedFile, path.string() + ": bad token record");
    }
    tok.resize(len);
    if (!in.read(tok.data(), len)) {
      throw Error(ErrorCode::kMalformedFile, path.string() + ": truncated vocabulary");
    }
  }
  const auto ei = [](std::uint64_t x) { return static_cast<Eigen::Index>(x); };
  RowMatrix e(ei(v), ei(d)), w1(ei(h), ei(d)), w2(ei(c), ei(h));
  Eigen::VectorXd b1(ei(h)), b2(ei(c));
  read_block(in, e);
  read_block(in, w1);
  read_block(in, b1);
  read_block(in, w2);
  read_block(in, b2);
  if (in.peek() != std::char_traits<char>::eof()) {
    throw Error(ErrorCode::kMalformedFile, path.string() + ": trailing bytes");
  }
  return ClassifierModel(Vocabulary::from_tokens(std::move(tokens)),
                         EmbeddingMatrix(std::move(e)), std::move(w1),
                         std::move(b1), std::move(w2), std::move(b2), seed);
}

void save_teacher_outputs(const std::filesystem::path& path,
                          std::span<const Eigen::VectorXd> outputs) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    out << i << '\t';
    for (Eigen::Index c = 0; c < outputs[i].size(); ++c) {
      if (c) out << ',';
      out << format_double(outputs[i][c]);
    }
    out << '\n';
  }
}

std::vector<Eigen::VectorXd> load_teacher_outputs(
    const std::filesystem::path& path, std::size_t expected_rows) {
  const auto lines = read_lines(path);
  std::vector<Eigen::VectorXd> out(expected_rows);
  std::vector<bool> seen(expected_rows, false);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    if (trim(lines[n]).empty()) continue;
    const auto where = path.string() + ":" + std::to_string(n + 1);
    const auto fields = split(lines[n], '\t');
    if (fields.size() != 2) throw Error(ErrorCode::kMalformedFile, where);
    const auto idx = parse_int(fields[0], where);
    if (idx < 0 || static_cast<std::size_t>(idx) >= expected_rows ||
        seen[static_cast<std::size_t>(idx)]) {
      throw Error(ErrorCode::kMalformedFile, where + ": bad sentence index");
    }
    const auto probs = split(fields[1], ',');
    Eigen::VectorXd p(static_cast<Eigen::Index>(probs.size()));
    for (std::size_t c = 0; c < probs.size(); ++c) {
      p[static_cast<Eigen::Index>(c)] = parse_double(probs[c], where);
    }
    out[static_cast<std::size_t>(idx)] = std::move(p);
    seen[static_cast<std::size_t>(idx)] = true;
  }
  for (std::size_t i = 0; i < expected_rows; ++i) {
    if (!seen[i]) {
      throw Error(ErrorCode::kMalformedFile,
                  path.string() + ": no output for sentence " + std::to_string(i));
    }
  }
  return out;
}

}  // namespace semperturb
