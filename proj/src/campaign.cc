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

#include "semperturb/campaign.h"

#include "json.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "semperturb/error.h"
#include "semperturb/neighbors.h"
#include "semperturb/synonyms.h"
#include "semperturb/text_util.h"
#include "semperturb/typo.h"

namespace semperturb {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

void check_keys(const json& obj, std::string_view section,
                std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) {
    throw Error(ErrorCode::kConfig, std::string(section) + " must be an object");
  }
  for (const auto& item : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
      throw Error(ErrorCode::kConfig,
                  "unknown key '" + item.key() + "' in " + std::string(section));
    }
  }
}

// Integers are read signed so that negative counts are caught, not wrapped.
std::int64_t get_int(const json& obj, const char* key, std::int64_t fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number_integer()) {
    throw Error(ErrorCode::kConfig, std::string(key) + " must be an integer");
  }
  return v.get<std::int64_t>();
}

std::size_t get_count(const json& obj, const char* key, std::size_t fallback,
                      std::int64_t minimum) {
  const auto v = get_int(obj, key, static_cast<std::int64_t>(fallback));
  if (v < minimum) {
    throw Error(ErrorCode::kConfig, std::string(key) + " must be >= " +
                                        std::to_string(minimum));
  }
  return static_cast<std::size_t>(v);
}

double get_real(const json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number()) {
    throw Error(ErrorCode::kConfig, std::string(key) + " must be a number");
  }
  return v.get<double>();
}

bool get_bool(const json& obj, const char* key, bool fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_boolean()) {
    throw Error(ErrorCode::kConfig, std::string(key) + " must be true or false");
  }
  return v.get<bool>();
}

std::optional<std::string> get_string(const json& obj, const char* key) {
  if (!obj.contains(key) || obj.at(key).is_null()) return std::nullopt;
  const auto& v = obj.at(key);
  if (!v.is_string()) {
    throw Error(ErrorCode::kConfig, std::string(key) + " must be a string");
  }
  return v.get<std::string>();
}

fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

std::optional<fs::path> get_path(const json& obj, const char* key,
                                 const fs::path& base) {
  if (const auto s = get_string(obj, key)) return resolve(base, *s);
  return std::nullopt;
}

const json& section(const json& root, const char* key) {
  static const json kEmpty = json::object();
  return root.contains(key) ? root.at(key) : kEmpty;
}

void require_file(const fs::path& path, std::string_view what) {
  if (!fs::is_regular_file(path)) {
    throw Error(ErrorCode::kIo,
                std::string(what) + " not found: " + path.string());
  }
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << text;
}

void prepare_output(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
}

// Runs fn(0..n-1) on up to `workers` threads. The exception of the lowest
// failing index, if any, is rethrown.
template <typename Fn>
void parallel_for(std::size_t n, std::size_t workers, Fn fn) {
  std::vector<std::exception_ptr> errors(n);
  auto guarded = [&](std::size_t i) {
    try {
      fn(i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  workers = std::min(workers, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) guarded(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) guarded(i);
      });
    }
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

struct LoadedResources {
  std::optional<TypoRuleSet> typo_rules;
  std::optional<SynonymKB> synonyms;
  std::optional<ContextualIndex> index;
  std::optional<SideVectors> side_vectors;
  std::optional<EmbeddingMatrix> static_embeddings;

  PerturbResources view(const Vocabulary& vocab) const {
    PerturbResources r;
    r.vocab = &vocab;
    r.typo_rules = typo_rules ? &*typo_rules : nullptr;
    r.synonyms = synonyms ? &*synonyms : nullptr;
    r.index = index ? &*index : nullptr;
    r.static_embeddings = static_embeddings ? &*static_embeddings : nullptr;
    return r;
  }
};

void check_resource_files(const CampaignConfig& cfg) {
  const auto& r = cfg.resources;
  require_file(r.corpus, "corpus");
  const auto& p = cfg.perturb;
  if (p.typo) {
    if (r.typo_rules) {
      require_file(*r.typo_rules, "typo rules");
    } else if (p.typo_mode == TypoMode::kCharacter) {
      throw Error(ErrorCode::kConfig,
                  "character typo mode needs resources.typo_rules");
    }
  }
  if (p.knowledge) {
    if (!r.synonyms) throw Error(ErrorCode::kConfig, "knowledge needs resources.synonyms");
    require_file(*r.synonyms, "synonym knowledge base");
  }
  if (p.contextual) {
    if (!r.index) throw Error(ErrorCode::kConfig, "contextual needs resources.index");
    require_file(*r.index, "contextual index");
    if (r.side_vectors) require_file(*r.side_vectors, "side vectors");
    if (r.static_embeddings) require_file(*r.static_embeddings, "static embeddings");
  }
}

LoadedResources load_resources(const CampaignConfig& cfg, const Vocabulary& vocab,
                               std::ostream& log) {
  LoadedResources out;
  const auto& r = cfg.resources;
  const auto& p = cfg.perturb;
  if (p.typo) {
    out.typo_rules = r.typo_rules ? load_typo_rules(*r.typo_rules)
                                  : TypoRuleSet::english_default();
  }
  if (p.knowledge) out.synonyms = load_synonym_kb(*r.synonyms);
  if (p.contextual) {
    auto built = load_index(*r.index, vocab);
    if (built.dropped > 0) {
      log << "index: dropped " << built.dropped << " entries outside the vocabulary\n";
    }
    out.index = std::move(built.index);
    if (r.side_vectors) {
      out.side_vectors = load_side_vectors(*r.side_vectors);
      if (out.side_vectors->size() > 0 && out.side_vectors->dim() != out.index->dim()) {
        throw Error(ErrorCode::kConfig, "side vector dim " +
                                            std::to_string(out.side_vectors->dim()) +
                                            " differs from index dim " +
                                            std::to_string(out.index->dim()));
      }
    }
    if (r.static_embeddings && p.static_fallback) {
      out.static_embeddings = load_embeddings(*r.static_embeddings, vocab);
      if (out.static_embeddings->dim() != out.index->dim()) {
        throw Error(ErrorCode::kConfig, "static embedding dim differs from index dim");
      }
    }
  }
  return out;
}

struct PreparedSentence {
  std::vector<TokenId> ids;
  std::vector<bool> mask;
  std::vector<PositionSpaces> spaces;
};

PreparedSentence prepare_sentence(const CorpusSentence& sentence,
                                  const Vocabulary& vocab,
                                  const LoadedResources& loaded,
                                  const CampaignConfig& cfg, std::size_t index) {
  PreparedSentence out;
  out.ids = to_ids(sentence.tokens, vocab);
  out.mask = sentence.mask;
  if (!out.mask.empty() && out.mask.size() != out.ids.size()) {
    throw Error(ErrorCode::kShapeMismatch,
                "sentence " + std::to_string(index) + ": mask length differs from token count");
  }
  const auto view = loaded.view(vocab);
  for (std::size_t i = 0; i < out.ids.size(); ++i) {
    if (!out.mask.empty() && !out.mask[i]) {
      out.spaces.push_back(PositionSpaces(SearchSpace(out.ids[i])));
      continue;
    }
    std::optional<std::span<const double>> query;
    if (loaded.side_vectors) query = loaded.side_vectors->find(sentence.side_key, i);
    out.spaces.push_back(position_spaces(sentence.tokens[i], query, cfg.perturb, view));
  }
  return out;
}

void check_side_vectors(const Corpus& corpus, const SideVectors& sv) {
  std::map<std::size_t, std::size_t> lengths;
  for (const auto& s : corpus.sentences) lengths[s.side_key] = s.tokens.size();
  for (const auto& [key, vec] : sv.rows()) {
    const auto it = lengths.find(key.first);
    if (it != lengths.end() && key.second >= it->second) {
      throw Error(ErrorCode::kShapeMismatch,
                  "side vector position " + std::to_string(key.second) +
                      " beyond sentence " + std::to_string(key.first));
    }
  }
}

void check_vocab_file(const CampaignConfig& cfg, const Vocabulary& model_vocab) {
  if (cfg.resources.vocab.empty() || !fs::exists(cfg.resources.vocab)) return;
  if (!(load_vocabulary(cfg.resources.vocab) == model_vocab)) {
    throw Error(ErrorCode::kVocabMismatch,
                "model vocabulary differs from " + cfg.resources.vocab.string());
  }
}

}  // namespace

void CampaignConfig::validate() const {
  if (perturb.k < perturb.eps || perturb.eps < 1) {
    throw Error(ErrorCode::kConfig, "perturb needs k >= eps >= 1");
  }
  attack.validate();
  train.validate();
  if (parallelism < 1) throw Error(ErrorCode::kConfig, "parallelism must be >= 1");
  if (dims.dim < 1 || dims.hidden < 1) {
    throw Error(ErrorCode::kConfig, "classifier dims must be positive");
  }
  if (dims.classes < 2) throw Error(ErrorCode::kConfig, "classifier needs >= 2 classes");
  if (attack.target_class && *attack.target_class >= dims.classes) {
    throw Error(ErrorCode::kConfig, "attack target is not a class index");
  }
  perturb.validate();
}

CampaignConfig parse_campaign_config(std::string_view text,
                                     const fs::path& base_dir) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kConfig, std::string("config is not valid JSON: ") + e.what());
  }
  check_keys(root, "config",
             {"tokenizer", "parallelism", "resources", "classifier", "train",
              "perturb", "attack", "output"});
  CampaignConfig cfg;

  if (const auto tok = get_string(root, "tokenizer")) {
    if (*tok == "whitespace") {
      cfg.tokenizer = Tokenizer::kWhitespace;
    } else if (*tok == "character") {
      cfg.tokenizer = Tokenizer::kCharacter;
    } else {
      throw Error(ErrorCode::kConfig, "tokenizer must be whitespace or character");
    }
  }
  cfg.parallelism = get_count(root, "parallelism", 1, 1);

  const json& res = section(root, "resources");
  check_keys(res, "resources",
             {"vocab", "corpus", "typo_rules", "synonyms", "index",
              "side_vectors", "static_embeddings"});
  cfg.resources.vocab = get_path(res, "vocab", base_dir).value_or(fs::path());
  cfg.resources.corpus = get_path(res, "corpus", base_dir).value_or(base_dir / "corpus.tsv");
  cfg.resources.typo_rules = get_path(res, "typo_rules", base_dir);
  cfg.resources.synonyms = get_path(res, "synonyms", base_dir);
  cfg.resources.index = get_path(res, "index", base_dir);
  cfg.resources.side_vectors = get_path(res, "side_vectors", base_dir);
  cfg.resources.static_embeddings = get_path(res, "static_embeddings", base_dir);

  const json& cls = section(root, "classifier");
  check_keys(cls, "classifier", {"path", "dim", "hidden", "classes"});
  cfg.model = get_path(cls, "path", base_dir).value_or(base_dir / "model.bin");
  cfg.dims.dim = get_count(cls, "dim", cfg.dims.dim, 1);
  cfg.dims.hidden = get_count(cls, "hidden", cfg.dims.hidden, 1);
  cfg.dims.classes = get_count(cls, "classes", cfg.dims.classes, 2);

  const json& tr = section(root, "train");
  check_keys(tr, "train",
             {"learning_rate", "epochs", "batch_size", "seed", "init_scale",
              "train_embeddings"});
  cfg.train.learning_rate = get_real(tr, "learning_rate", cfg.train.learning_rate);
  cfg.train.epochs = get_count(tr, "epochs", cfg.train.epochs, 0);
  cfg.train.batch_size = get_count(tr, "batch_size", cfg.train.batch_size, 1);
  cfg.train.seed = get_count(tr, "seed", cfg.train.seed, 0);
  cfg.train.init_scale = get_real(tr, "init_scale", cfg.train.init_scale);
  cfg.train.train_embeddings = get_bool(tr, "train_embeddings", cfg.train.train_embeddings);

  const json& pt = section(root, "perturb");
  check_keys(pt, "perturb", {"functions", "typo_mode", "k", "eps", "static_fallback"});
  if (pt.contains("functions")) {
    const auto& fns = pt.at("functions");
    if (!fns.is_array()) throw Error(ErrorCode::kConfig, "functions must be a list");
    for (const auto& f : fns) {
      const std::string name = f.is_string() ? f.get<std::string>() : "";
      if (name == "typo") {
        cfg.perturb.typo = true;
      } else if (name == "knowledge") {
        cfg.perturb.knowledge = true;
      } else if (name == "contextual") {
        cfg.perturb.contextual = true;
      } else if (name == "full_vocabulary") {
        cfg.perturb.full_vocabulary = true;
      } else {
        throw Error(ErrorCode::kConfig, "unknown perturbation function '" + name + "'");
      }
    }
  }
  if (const auto mode = get_string(pt, "typo_mode")) {
    if (*mode == "english") {
      cfg.perturb.typo_mode = TypoMode::kEnglish;
    } else if (*mode == "character") {
      cfg.perturb.typo_mode = TypoMode::kCharacter;
    } else {
      throw Error(ErrorCode::kConfig, "typo_mode must be english or character");
    }
  }
  cfg.perturb.k = get_count(pt, "k", cfg.perturb.k, 0);
  cfg.perturb.eps = get_count(pt, "eps", cfg.perturb.eps, 0);
  cfg.perturb.static_fallback = get_bool(pt, "static_fallback", cfg.perturb.static_fallback);

  const json& at = section(root, "attack");
  check_keys(at, "attack",
             {"c", "kappa", "m", "p", "alpha", "goal", "target", "early_exit", "seed"});
  cfg.attack.c = get_real(at, "c", cfg.attack.c);
  cfg.attack.kappa = get_real(at, "kappa", cfg.attack.kappa);
  cfg.attack.max_iterations = get_count(at, "m", cfg.attack.max_iterations, 1);
  const auto p = get_int(at, "p", 2);
  if (p != 1 && p != 2) throw Error(ErrorCode::kConfig, "p must be 1 or 2");
  cfg.attack.p = p == 1 ? Norm::kL1 : Norm::kL2;
  cfg.attack.step_size = get_real(at, "alpha", cfg.attack.step_size);
  if (const auto goal = get_string(at, "goal")) {
    if (*goal == "untargeted") {
      cfg.attack.goal = AttackGoal::kUntargeted;
    } else if (*goal == "targeted") {
      cfg.attack.goal = AttackGoal::kTargeted;
    } else {
      throw Error(ErrorCode::kConfig, "goal must be targeted or untargeted");
    }
  }
  if (at.contains("target") && !at.at("target").is_null()) {
    cfg.attack.target_class = get_count(at, "target", 0, 0);
  }
  cfg.attack.early_exit = get_bool(at, "early_exit", cfg.attack.early_exit);
  cfg.attack.seed = get_count(at, "seed", cfg.attack.seed, 0);

  const json& out = section(root, "output");
  check_keys(out, "output",
             {"student_model", "teacher_outputs", "dataset", "report", "table",
              "space_report"});
  auto out_path = [&](const char* key, const char* fallback) {
    return get_path(out, key, base_dir).value_or(base_dir / fallback);
  };
  cfg.output.student_model = out_path("student_model", "student.bin");
  cfg.output.teacher_outputs = out_path("teacher_outputs", "teacher_outputs.tsv");
  cfg.output.dataset = out_path("dataset", "adversarial.tsv");
  cfg.output.report = out_path("report", "report.txt");
  cfg.output.table = out_path("table", "table.csv");
  cfg.output.space_report = out_path("space_report", "spaces.txt");

  cfg.validate();
  return cfg;
}

CampaignConfig load_campaign_config(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_campaign_config(text.str(), path.parent_path());
}

void cmd_train(const CampaignConfig& cfg, std::ostream& log) {
  cfg.validate();
  require_file(cfg.resources.vocab, "vocabulary");
  require_file(cfg.resources.corpus, "corpus");
  const auto vocab = load_vocabulary(cfg.resources.vocab);
  const auto corpus = load_corpus(cfg.resources.corpus, cfg.tokenizer);
  const auto sequences = to_sequences(corpus, vocab);
  if (sequences.empty()) throw Error(ErrorCode::kEmptyDataset, "corpus is empty");
  auto model = ClassifierModel::initialize(vocab, cfg.dims, cfg.train.init_scale,
                                           cfg.train.seed);
  const auto result = train(std::move(model), sequences, cfg.train);
  prepare_output(cfg.model);
  save_model(cfg.model, result.model);
  if (!result.epoch_loss.empty()) {
    log << "final_loss = " << format_double(result.epoch_loss.back()) << '\n';
  }
  log << "accuracy = " << format_double(result.accuracy) << '\n';
}

void cmd_distill(const CampaignConfig& cfg, const fs::path& teacher_model,
                 std::ostream& log) {
  cfg.validate();
  require_file(teacher_model, "teacher model");
  require_file(cfg.resources.corpus, "corpus");
  const auto teacher = load_model(teacher_model);
  const auto corpus = load_corpus(cfg.resources.corpus, cfg.tokenizer);
  const auto sequences = to_sequences(corpus, teacher.vocab());
  if (sequences.empty()) throw Error(ErrorCode::kEmptyDataset, "corpus is empty");

  std::vector<Eigen::VectorXd> outputs;
  outputs.reserve(sequences.size());
  for (const auto& s : sequences) outputs.push_back(softmax(forward(teacher, s.ids)));
  prepare_output(cfg.output.teacher_outputs);
  save_teacher_outputs(cfg.output.teacher_outputs, outputs);
  // The student only sees what was written, as a query-only attacker would.
  const auto soft = load_teacher_outputs(cfg.output.teacher_outputs, sequences.size());

  ClassifierDims dims = cfg.dims;
  dims.classes = teacher.num_classes();
  auto student = ClassifierModel::initialize(teacher.vocab(), dims,
                                             cfg.train.init_scale, cfg.train.seed);
  const auto result = distill(std::move(student), soft, sequences, cfg.train);
  prepare_output(cfg.output.student_model);
  save_model(cfg.output.student_model, result.model);
  log << "agreement = " << format_double(result.agreement) << '\n';
}

MetricsReport cmd_attack(const CampaignConfig& cfg, std::ostream& log) {
  cfg.validate();
  cfg.perturb.validate();
  require_file(cfg.model, "model");
  check_resource_files(cfg);
  const auto model = load_model(cfg.model);
  const Vocabulary& vocab = model.vocab();
  check_vocab_file(cfg, vocab);
  if (cfg.attack.target_class && *cfg.attack.target_class >= model.num_classes()) {
    throw Error(ErrorCode::kConfig, "attack target is not a class of the model");
  }
  const auto corpus = load_corpus(cfg.resources.corpus, cfg.tokenizer);
  const auto loaded = load_resources(cfg, vocab, log);
  if (loaded.side_vectors) check_side_vectors(corpus, *loaded.side_vectors);
  for (std::size_t s = 0; s < corpus.sentences.size(); ++s) {
    if (corpus.sentences[s].label >= model.num_classes()) {
      throw Error(ErrorCode::kLabelOutOfRange,
                  "sentence " + std::to_string(s) + " has label " +
                      std::to_string(corpus.sentences[s].label));
    }
  }

  const std::size_t n = corpus.sentences.size();
  const bool targeted = cfg.attack.goal == AttackGoal::kTargeted;
  std::vector<bool> rejected(n, false);
  for (std::size_t s = 0; s < n; ++s) {
    if (targeted && corpus.sentences[s].label == *cfg.attack.target_class) {
      rejected[s] = true;
      log << "sentence " << s << ": target equals true label, skipped\n";
    }
  }

  std::vector<std::optional<AdvRecord>> records(n);
  std::vector<std::vector<PositionSpaces>> spaces(n);
  parallel_for(n, cfg.parallelism, [&](std::size_t s) {
    const auto& sentence = corpus.sentences[s];
    auto prepared = prepare_sentence(sentence, vocab, loaded, cfg, s);
    if (!rejected[s]) {
      std::vector<SearchSpace> combined;
      combined.reserve(prepared.spaces.size());
      for (const auto& ps : prepared.spaces) combined.push_back(ps.combined);
      const auto result = run_attack(model, prepared.ids, sentence.label, combined,
                                     prepared.mask, cfg.attack);
      AdvRecord rec;
      rec.original_ids = prepared.ids;
      rec.adversarial_ids = result.adversarial_ids;
      rec.truth = sentence.label;
      if (targeted) rec.target = cfg.attack.target_class;
      rec.success = result.success;
      rec.perturbed_positions = result.perturbed_positions;
      rec.mask = prepared.mask;
      records[s] = std::move(rec);
    }
    for (std::size_t i = 0; i < prepared.spaces.size(); ++i) {
      if (prepared.mask.empty() || prepared.mask[i]) {
        spaces[s].push_back(std::move(prepared.spaces[i]));
      }
    }
  });

  AdvDataset dataset;
  dataset.vocab_fingerprint = vocab.fingerprint();
  std::vector<PositionSpaces> all_spaces;
  for (std::size_t s = 0; s < n; ++s) {
    if (records[s]) dataset.records.push_back(std::move(*records[s]));
    for (auto& ps : spaces[s]) all_spaces.push_back(std::move(ps));
  }
  auto report = evaluate(dataset, model);
  report.rejected = static_cast<std::size_t>(std::count(rejected.begin(), rejected.end(), true));
  report.spaces = space_stats(all_spaces);

  prepare_output(cfg.output.dataset);
  save_dataset(cfg.output.dataset, dataset, vocab);
  write_text(cfg.output.report, format_report(report));
  write_text(cfg.output.table, format_table(dataset, model));
  log << format_report(report);
  return report;
}

MetricsReport cmd_transfer(const fs::path& dataset_path, const fs::path& model_path,
                           const std::optional<fs::path>& report_path,
                           std::ostream& log) {
  require_file(dataset_path, "adversarial dataset");
  require_file(model_path, "model");
  const auto model = load_model(model_path);
  const auto dataset = load_dataset(dataset_path, model.vocab());
  const auto report = transfer_eval(dataset, model);
  if (report_path) write_text(*report_path, format_report(report));
  log << format_report(report);
  return report;
}

SpaceStats cmd_audit_spaces(const CampaignConfig& cfg, std::ostream& log) {
  cfg.validate();
  cfg.perturb.validate();
  require_file(cfg.resources.vocab, "vocabulary");
  check_resource_files(cfg);
  const auto vocab = load_vocabulary(cfg.resources.vocab);
  const auto corpus = load_corpus(cfg.resources.corpus, cfg.tokenizer);
  const auto loaded = load_resources(cfg, vocab, log);
  if (loaded.side_vectors) check_side_vectors(corpus, *loaded.side_vectors);

  const std::size_t n = corpus.sentences.size();
  std::vector<std::vector<PositionSpaces>> spaces(n);
  parallel_for(n, cfg.parallelism, [&](std::size_t s) {
    auto prepared = prepare_sentence(corpus.sentences[s], vocab, loaded, cfg, s);
    for (std::size_t i = 0; i < prepared.spaces.size(); ++i) {
      if (prepared.mask.empty() || prepared.mask[i]) {
        spaces[s].push_back(std::move(prepared.spaces[i]));
      }
    }
  });
  std::vector<PositionSpaces> all_spaces;
  for (auto& per_sentence : spaces) {
    for (auto& ps : per_sentence) all_spaces.push_back(std::move(ps));
  }
  const auto stats = space_stats(all_spaces);
  write_text(cfg.output.space_report, format_space_stats(stats));
  log << format_space_stats(stats);
  return stats;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedFile:
    case ErrorCode::kIo:
    case ErrorCode::kConfig:
    case ErrorCode::kVocabMismatch:
    case ErrorCode::kNoFunctionEnabled:
    case ErrorCode::kInconsistentDimension:
      return 2;
    default:
      return 3;
  }
}

}  // namespace semperturb
