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

#include "semperturb/evaluation.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "semperturb/error.h"
#include "semperturb/text_util.h"

namespace semperturb {

void AdvDataset::validate() const {
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    if (r.original_ids.size() != r.adversarial_ids.size() ||
        (!r.mask.empty() && r.mask.size() != r.original_ids.size())) {
      throw Error(ErrorCode::kShapeMismatch,
                  "record " + std::to_string(i) + " has mismatched lengths");
    }
    if (r.target && *r.target == r.truth) {
      throw Error(ErrorCode::kTargetEqualsTruth, "record " + std::to_string(i));
    }
  }
}

namespace {

void require_nonempty(const AdvDataset& dataset) {
  if (dataset.records.empty()) {
    throw Error(ErrorCode::kEmptyDataset, "adversarial dataset has no records");
  }
}

double fraction(std::size_t count, std::size_t total) {
  return static_cast<double>(count) / static_cast<double>(total);
}

}  // namespace

double tsr(const AdvDataset& dataset, const ClassifierModel& model) {
  require_nonempty(dataset);
  std::size_t hits = 0;
  for (const auto& r : dataset.records) {
    if (!r.target) throw Error(ErrorCode::kMissingTarget, "record without target");
    hits += predict(model, r.adversarial_ids) == *r.target;
  }
  return fraction(hits, dataset.records.size());
}

double usr(const AdvDataset& dataset, const ClassifierModel& model) {
  require_nonempty(dataset);
  std::size_t hits = 0;
  for (const auto& r : dataset.records) {
    hits += predict(model, r.adversarial_ids) != r.truth;
  }
  return fraction(hits, dataset.records.size());
}

double perturbation_rate(const AdvRecord& record) {
  std::size_t attackable = record.original_ids.size();
  if (!record.mask.empty()) {
    attackable = static_cast<std::size_t>(
        std::count(record.mask.begin(), record.mask.end(), true));
  }
  if (attackable == 0) return 0.0;
  return fraction(record.perturbed_positions.size(), attackable);
}

SpaceStats space_stats(std::span<const PositionSpaces> spaces) {
  SpaceStats stats;
  stats.positions = spaces.size();
  if (spaces.empty()) return stats;
  std::map<std::string, std::size_t> totals;
  bool any_typo = false, any_knowledge = false, any_contextual = false, any_full = false;
  for (const auto& ps : spaces) {
    any_typo |= ps.typo.has_value();
    any_knowledge |= ps.knowledge.has_value();
    any_contextual |= ps.contextual.has_value();
    any_full |= ps.full_vocabulary.has_value();
  }
  for (const auto& ps : spaces) {
    // A skipped function (e.g. no contextual query) offers only the identity.
    auto extra = [](const std::optional<SearchSpace>& s) {
      return s ? s->size() - 1 : std::size_t{0};
    };
    if (any_typo) totals["typo"] += extra(ps.typo);
    if (any_knowledge) totals["knowledge"] += extra(ps.knowledge);
    if (any_contextual) totals["contextual"] += extra(ps.contextual);
    if (any_full) totals["full_vocabulary"] += extra(ps.full_vocabulary);
    totals["union"] += ps.combined.size() - 1;
  }
  for (const auto& [name, total] : totals) {
    stats.mean_candidates[name] = fraction(total, spaces.size());
  }
  return stats;
}

MetricsReport evaluate(const AdvDataset& dataset, const ClassifierModel& model) {
  require_nonempty(dataset);
  dataset.validate();
  MetricsReport report;
  report.records = dataset.records.size();
  bool all_targeted = true;
  std::size_t targeted_hits = 0;
  double rate_untargeted = 0.0;
  double rate_targeted = 0.0;
  for (const auto& r : dataset.records) {
    const std::size_t pred = predict(model, r.adversarial_ids);
    const double rate = perturbation_rate(r);
    if (pred != r.truth) {
      ++report.untargeted_successes;
      rate_untargeted += rate;
    }
    if (!r.target) {
      all_targeted = false;
    } else if (pred == *r.target) {
      ++targeted_hits;
      rate_targeted += rate;
    }
  }
  report.usr = fraction(report.untargeted_successes, report.records);
  if (report.untargeted_successes > 0) {
    report.perturbation_untargeted =
        rate_untargeted / static_cast<double>(report.untargeted_successes);
  }
  if (all_targeted) {
    report.targeted_successes = targeted_hits;
    report.tsr = fraction(targeted_hits, report.records);
    report.perturbation_targeted =
        targeted_hits > 0 ? rate_targeted / static_cast<double>(targeted_hits) : 0.0;
  }
  return report;
}

MetricsReport transfer_eval(const AdvDataset& dataset,
                            const ClassifierModel& other_model) {
  if (dataset.vocab_fingerprint != other_model.vocab().fingerprint()) {
    throw Error(ErrorCode::kVocabMismatch,
                "model vocabulary differs from the dataset's generator");
  }
  return evaluate(dataset, other_model);
}

namespace {

std::string join_tokens(std::span<const TokenId> ids, const Vocabulary& vocab) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out += ' ';
    out += vocab.token(ids[i]);
  }
  return out;
}

std::vector<TokenId> parse_tokens(std::string_view field, const Vocabulary& vocab,
                                  const std::string& where) {
  std::vector<TokenId> ids;
  for (const auto& tok : split_whitespace(field)) {
    const auto id = vocab.find(tok);
    if (!id) {
      throw Error(ErrorCode::kVocabMismatch, where + ": token '" + tok + "' not in vocabulary");
    }
    ids.push_back(*id);
  }
  return ids;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

void save_dataset(const std::filesystem::path& path, const AdvDataset& dataset,
                  const Vocabulary& vocab) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << "#vocab\t" << hex64(dataset.vocab_fingerprint) << '\t' << vocab.size() << '\n';
  for (const auto& r : dataset.records) {
    out << join_tokens(r.original_ids, vocab) << '\t'
        << join_tokens(r.adversarial_ids, vocab) << '\t' << r.truth << '\t';
    if (r.target) {
      out << *r.target;
    } else {
      out << '-';
    }
    out << '\t';
    if (r.perturbed_positions.empty()) out << '-';
    for (std::size_t i = 0; i < r.perturbed_positions.size(); ++i) {
      if (i) out << ',';
      out << r.perturbed_positions[i];
    }
    out << '\t' << (r.success ? 1 : 0) << '\t';
    if (r.mask.empty()) out << '-';
    for (bool b : r.mask) out << (b ? '1' : '0');
    out << '\n';
  }
}

AdvDataset load_dataset(const std::filesystem::path& path,
                        const Vocabulary& vocab) {
  const auto lines = read_lines(path);
  AdvDataset dataset;
  dataset.vocab_fingerprint = vocab.fingerprint();
  std::size_t first = 0;
  if (!lines.empty() && lines[0].rfind("#vocab", 0) == 0) {
    const auto header = split(lines[0], '\t');
    if (header.size() != 3 || header[1] != hex64(vocab.fingerprint()) ||
        header[2] != std::to_string(vocab.size())) {
      throw Error(ErrorCode::kVocabMismatch,
                  path.string() + " was generated with a different vocabulary");
    }
    first = 1;
  }
  for (std::size_t n = first; n < lines.size(); ++n) {
    if (trim(lines[n]).empty()) continue;
    const auto where = path.string() + ":" + std::to_string(n + 1);
    const auto f = split(lines[n], '\t');
    if (f.size() < 5 || f.size() > 7) {
      throw Error(ErrorCode::kMalformedFile, where + ": expected 5-7 fields");
    }
    AdvRecord r;
    r.original_ids = parse_tokens(f[0], vocab, where);
    r.adversarial_ids = parse_tokens(f[1], vocab, where);
    const auto truth = parse_int(f[2], where);
    if (truth < 0) throw Error(ErrorCode::kMalformedFile, where + ": negative label");
    r.truth = static_cast<std::size_t>(truth);
    if (trim(f[3]) != "-") {
      const auto target = parse_int(f[3], where);
      if (target < 0) throw Error(ErrorCode::kMalformedFile, where + ": negative target");
      r.target = static_cast<std::size_t>(target);
    }
    if (trim(f[4]) != "-") {
      for (const auto& idx : split(f[4], ',')) {
        const auto i = parse_int(idx, where);
        if (i < 0 || static_cast<std::size_t>(i) >= r.original_ids.size()) {
          throw Error(ErrorCode::kMalformedFile, where + ": bad perturbed index");
        }
        r.perturbed_positions.push_back(static_cast<std::size_t>(i));
      }
    }
    if (f.size() >= 6) r.success = trim(f[5]) == "1";
    if (f.size() == 7 && trim(f[6]) != "-") {
      for (char c : trim(f[6])) r.mask.push_back(c == '1');
    }
    dataset.records.push_back(std::move(r));
  }
  dataset.validate();
  return dataset;
}

std::string format_space_stats(const SpaceStats& stats) {
  std::ostringstream out;
  out << "space.positions = " << stats.positions << '\n';
  for (const auto& [name, mean] : stats.mean_candidates) {
    out << "space.mean_candidates." << name << " = " << format_double(mean) << '\n';
  }
  return out.str();
}

std::string format_report(const MetricsReport& r) {
  std::ostringstream out;
  out << "records = " << r.records << '\n';
  out << "rejected = " << r.rejected << '\n';
  out << "usr = " << format_double(r.usr) << '\n';
  out << "usr_count = " << r.untargeted_successes << '\n';
  if (r.tsr) {
    out << "tsr = " << format_double(*r.tsr) << '\n';
    out << "tsr_count = " << *r.targeted_successes << '\n';
  }
  out << "perturbation_averaged_over = successful_records\n";
  out << "perturbation_rate.untargeted = " << format_double(r.perturbation_untargeted) << '\n';
  if (r.perturbation_targeted) {
    out << "perturbation_rate.targeted = " << format_double(*r.perturbation_targeted) << '\n';
  }
  if (r.spaces.positions > 0) out << format_space_stats(r.spaces);
  return out.str();
}

std::string format_table(const AdvDataset& dataset, const ClassifierModel& model) {
  std::ostringstream out;
  out << "index,truth,target,prediction,untargeted_success,targeted_success,"
         "perturbed,attackable,perturbation_rate\n";
  for (std::size_t i = 0; i < dataset.records.size(); ++i) {
    const auto& r = dataset.records[i];
    const std::size_t pred = predict(model, r.adversarial_ids);
    const std::size_t attackable =
        r.mask.empty() ? r.original_ids.size()
                       : static_cast<std::size_t>(std::count(r.mask.begin(), r.mask.end(), true));
    out << i << ',' << r.truth << ',';
    if (r.target) out << *r.target;
    out << ',' << pred << ',' << (pred != r.truth ? 1 : 0) << ',';
    if (r.target) out << (pred == *r.target ? 1 : 0);
    out << ',' << r.perturbed_positions.size() << ',' << attackable << ','
        << format_double(perturbation_rate(r)) << '\n';
  }
  return out.str();
}

}  // namespace semperturb
