// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <iomanip>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ttsfe/data.hpp"
#include "ttsfe/metrics.hpp"
#include "ttsfe/model.hpp"
#include "ttsfe/training.hpp"

namespace ttsfe {

// Full evaluation over the given tasks' datasets. Keys follow the report's
// external names: tn.line_acc, tn.wer, tn.rule_acc, pos.acc, hd.micro,
// hd.macro, plus example counts.
template <typename S>
EvalReport evaluate(const MultiTaskModel<S>& model,
                    const ContextualEncoder<S>& lm, const RuleRegistry& rules,
                    const Datasets& data, const std::vector<Task>& tasks,
                    int beam_width = 8) {
  EvalReport report;
  for (Task task : tasks) {
    switch (task) {
      case Task::TN: {
        if (data.tn.empty()) fail_data("no evaluation data for task tn");
        std::vector<std::string> preds, refs;
        std::int64_t rule_hit = 0, rule_total = 0;
        for (const TNExample& ex : data.tn) {
          preds.push_back(model.normalize(ex.text, rules, lm, beam_width));
          refs.push_back(ex.norm);
          const TokenSequence seq = tokenize(ex.text);
          const RuleLogits scores = masked_log_softmax(mask_logits(
              model.rule_logits(ex.text, lm), rules.applicability_mask(seq)));
          for (const auto& [start, rule] : ex.rules) {
            Eigen::Index best = 0;
            scores.row(start).maxCoeff(&best);
            rule_hit += static_cast<int>(best) == rule ? 1 : 0;
            ++rule_total;
          }
        }
        report.set("tn.line_acc", line_accuracy(preds, refs));
        report.set("tn.wer", corpus_wer(preds, refs));
        report.set("tn.rule_acc", static_cast<double>(rule_hit) /
                                      static_cast<double>(rule_total));
        report.set_count("tn.lines", static_cast<std::int64_t>(preds.size()));
        break;
      }
      case Task::POS: {
        if (data.pos.empty()) fail_data("no evaluation data for task pos");
        std::vector<int> pred, gold;
        for (const POSExample& ex : data.pos) {
          const std::vector<int> tags =
              model.tag_pos(detail::join_words(ex.words), lm);
          for (std::size_t w = 0; w < ex.words.size(); ++w) {
            pred.push_back(tags[w]);
            gold.push_back(PosTagset::index(ex.tags[w]));
          }
        }
        report.set("pos.acc", pos_accuracy(pred, gold));
        report.set_count("pos.words", static_cast<std::int64_t>(pred.size()));
        break;
      }
      case Task::HD: {
        if (data.hd.empty()) fail_data("no evaluation data for task hd");
        std::vector<HdPrediction> preds;
        std::set<std::pair<std::string, std::string>> classes;
        for (const HDExample& ex : data.hd) {
          const int idx = model.classify_homograph(
              ex.sentence, static_cast<std::size_t>(ex.start),
              static_cast<std::size_t>(ex.end), ex.homograph, lm);
          preds.push_back({ex.homograph, ex.label,
                           model.lexicon().entry(ex.homograph).labels.at(
                               static_cast<std::size_t>(idx))});
          classes.emplace(ex.homograph, ex.label);
        }
        const auto [micro, macro] = hd_accuracy(preds);
        report.set("hd.micro", micro);
        report.set("hd.macro", macro);
        report.set_count("hd.examples", static_cast<std::int64_t>(preds.size()));
        report.set_count("hd.classes", static_cast<std::int64_t>(classes.size()));
        break;
      }
    }
  }
  return report;
}

// One trained-and-evaluated task subset of the ablation grid.
struct AblationRow {
  std::vector<Task> tasks;
  EvalReport report;
};

// The seven non-empty task subsets, full model first, then pairs, then
// single-task rows.
inline std::vector<std::vector<Task>> all_task_subsets() {
  return {{Task::TN, Task::POS, Task::HD},
          {Task::TN, Task::POS},
          {Task::TN, Task::HD},
          {Task::POS, Task::HD},
          {Task::TN},
          {Task::POS},
          {Task::HD}};
}

inline std::string subset_name(const std::vector<Task>& tasks) {
  std::string out;
  for (Task task : tasks) {
    if (!out.empty()) out += "+";
    out += task_name(task);
  }
  return out;
}

namespace detail {

inline std::string grid_cell(const EvalReport& report, const std::string& key) {
  if (!report.has(key)) return "--";
  std::ostringstream out;
  out << std::fixed << std::setprecision(4) << report.at(key);
  return out.str();
}

}  // namespace detail

// Renders the grid as a fixed-column text table, one row per subset and a
// dash wherever the row's model was not trained on the column's task.
inline std::string ablation_table(const std::vector<AblationRow>& rows) {
  static const char* kColumns[] = {"tn.line_acc", "tn.wer", "pos.acc",
                                   "hd.micro", "hd.macro"};
  std::ostringstream out;
  out << std::left << std::setw(12) << "tasks";
  for (const char* column : kColumns) out << "  " << std::setw(11) << column;
  out << "\n";
  for (const AblationRow& row : rows) {
    out << std::left << std::setw(12) << subset_name(row.tasks);
    for (const char* column : kColumns)
      out << "  " << std::setw(11) << detail::grid_cell(row.report, column);
    out << "\n";
  }
  return out.str();
}

// Trains one fresh model per subset for per_task_iters x |subset| iterations
// and evaluates exactly the trained tasks. Every run starts from the same
// seed and trains without mid-run validation.
template <typename S>
std::vector<AblationRow> ablation_grid(const ModelConfig& mcfg,
                                       const RuleRegistry& rules,
                                       const HomographLexicon& lexicon,
                                       const Datasets& train,
                                       const Datasets& eval_data,
                                       const TrainConfig& base,
                                       int per_task_iters, int beam_width = 8,
                                       std::ostream* log = nullptr) {
  if (per_task_iters <= 0) fail_config("per_task_iters must be positive");
  std::vector<AblationRow> rows;
  for (const std::vector<Task>& subset : all_task_subsets()) {
    MultiTaskModel<S> model(mcfg, rules, lexicon);
    const auto lm = model.make_context_encoder();
    TrainConfig cfg = base;
    cfg.tasks = subset;
    cfg.total_iterations =
        per_task_iters * static_cast<std::int64_t>(subset.size());
    if (log) *log << "# " << subset_name(subset) << ": " << cfg.total_iterations
                  << " iterations\n";
    train_loop(model, lm, rules, train, Datasets{}, cfg);
    rows.push_back({subset, evaluate(model, lm, rules, eval_data, subset,
                                     beam_width)});
  }
  return rows;
}

}  // namespace ttsfe
