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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ttsfe/checkpoint.hpp"
#include "ttsfe/data.hpp"
#include "ttsfe/model.hpp"

namespace ttsfe {

enum class Task { TN, POS, HD };

inline const char* task_name(Task task) {
  switch (task) {
    case Task::TN: return "tn";
    case Task::POS: return "pos";
    case Task::HD: return "hd";
  }
  return "?";
}

struct TrainConfig {
  double lr = 5e-4;
  double beta1 = 0.9;
  double beta2 = 0.99;
  double eps = 1e-8;
  double weight_decay = 0.01;
  int batch_size = 128;
  double decay_factor = 0.2;
  std::int64_t decay_every = 16000;
  std::int64_t total_iterations = 3000;
  std::int64_t validate_every = 500;
  // After this step the normalization layers train against their frozen
  // running statistics, closing the train/inference gap; 0 disables.
  std::int64_t freeze_stats_after = 0;
  std::vector<Task> tasks = {Task::TN, Task::POS, Task::HD};
  std::uint64_t seed = 1;

  void validate() const {
    if (!(lr > 0)) fail_config("learning rate must be positive");
    if (!(beta1 >= 0 && beta1 < 1) || !(beta2 >= 0 && beta2 < 1))
      fail_config("adam betas must lie in [0, 1)");
    if (!(eps > 0)) fail_config("adam epsilon must be positive");
    if (weight_decay < 0) fail_config("weight decay must be non-negative");
    if (batch_size <= 0) fail_config("batch size must be positive");
    if (!(decay_factor > 0 && decay_factor <= 1))
      fail_config("decay factor must lie in (0, 1]");
    if (decay_every <= 0) fail_config("decay interval must be positive");
    if (total_iterations <= 0) fail_config("iteration count must be positive");
    if (validate_every <= 0) fail_config("validation interval must be positive");
    if (freeze_stats_after < 0)
      fail_config("statistics freeze point must be non-negative");
    if (tasks.empty()) fail_config("task cycle must not be empty");
    for (std::size_t i = 0; i < tasks.size(); ++i)
      for (std::size_t j = i + 1; j < tasks.size(); ++j)
        if (tasks[i] == tasks[j]) fail_config("task cycle repeats a task");
  }
};

// Step-decayed rate: the drop lands exactly on multiples of `decay_every`.
inline double lr_at_step(const TrainConfig& cfg, std::int64_t step) {
  if (step < 1) fail_config("steps are numbered from 1");
  return cfg.lr * std::pow(cfg.decay_factor,
                           static_cast<double>(step / cfg.decay_every));
}

struct Datasets {
  std::vector<TNExample> tn;
  std::vector<POSExample> pos;
  std::vector<HDExample> hd;
};

template <typename S>
struct LossGraph {
  nn::Var<S> loss;
  int labeled = 0;
};

namespace detail {

inline std::vector<std::vector<bool>> mask_rows(const BoolMat& mask) {
  std::vector<std::vector<bool>> rows(static_cast<std::size_t>(mask.rows()));
  for (Eigen::Index r = 0; r < mask.rows(); ++r) {
    rows[static_cast<std::size_t>(r)].resize(static_cast<std::size_t>(mask.cols()));
    for (Eigen::Index c = 0; c < mask.cols(); ++c)
      rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = mask(r, c);
  }
  return rows;
}

inline std::string join_words(const std::vector<std::string>& words) {
  std::string text;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i > 0) text += ' ';
    text += words[i];
  }
  return text;
}

}  // namespace detail

// Masked cross-entropy over rule logits, labeled only at the tokens where a
// gold rule application starts; tail tokens inside an application get no loss.
template <typename S>
LossGraph<S> tn_loss(nn::Tape<S>& t, const MultiTaskModel<S>& model,
                     const ContextualEncoder<S>& lm, const RuleRegistry& rules,
                     const TNExample& example) {
  const TokenSequence seq = tokenize(example.text);
  if (seq.empty()) fail_data("empty normalization example: " + example.text);
  if (example.rules.empty())
    fail_data("normalization example has no rule applications: " + example.text);
  nn::Var<S> fused =
      model.encode(t, seq, model.first_layer_context(t, example.text, lm));
  nn::Var<S> logits = model.tn_logits(t, fused);
  std::vector<std::pair<int, int>> labeled;
  labeled.reserve(example.rules.size());
  for (const auto& [start, rule_id] : example.rules)
    labeled.emplace_back(start, rule_id);
  nn::Var<S> loss = nn::masked_ce_loss(
      t, logits, detail::mask_rows(rules.applicability_mask(seq)),
      std::move(labeled));
  return {loss, static_cast<int>(example.rules.size())};
}

// Plain cross-entropy over one pooled logit row per word.
template <typename S>
LossGraph<S> pos_loss(nn::Tape<S>& t, const MultiTaskModel<S>& model,
                      const ContextualEncoder<S>& lm, const POSExample& example) {
  if (example.words.size() != example.tags.size() || example.words.empty())
    fail_data("tagging example needs one tag per word");
  const std::string text = detail::join_words(example.words);
  const TokenSequence seq = tokenize(text);
  std::vector<std::vector<int>> groups = word_groups(seq);
  if (groups.size() != example.words.size())
    fail_data("tagging example words do not survive tokenization: " + text);
  std::vector<int> golds;
  golds.reserve(example.tags.size());
  for (const std::string& tag : example.tags)
    golds.push_back(PosTagset::index(tag));
  nn::Var<S> fused = model.encode(t, seq, model.first_layer_context(t, text, lm));
  nn::Var<S> logits = model.pos_logits(t, fused, std::move(groups));
  return {nn::ce_loss_rows(t, logits, std::move(golds)),
          static_cast<int>(example.words.size())};
}

// Cross-entropy over the occurrence's pronunciation labels.
template <typename S>
LossGraph<S> hd_loss(nn::Tape<S>& t, const MultiTaskModel<S>& model,
                     const ContextualEncoder<S>& lm, const HDExample& example,
                     bool use_residual = true) {
  const TokenSequence seq = tokenize(example.sentence);
  if (seq.empty()) fail_data("empty homograph example: " + example.sentence);
  const HomographLocation loc = locate_homograph(
      seq, lm, example.sentence, static_cast<std::size_t>(example.start),
      static_cast<std::size_t>(example.end));
  const int gold = model.lexicon().label_index(example.homograph, example.label);
  nn::Var<S> fused =
      model.encode(t, seq, model.first_layer_context(t, example.sentence, lm));
  nn::Var<S> logits =
      model.hd_logits(t, fused, loc, model.final_layer_context(t, example.sentence, lm),
                      example.homograph, use_residual);
  return {nn::ce_loss_rows(t, logits, {gold}), 1};
}

// Decoupled weight decay update, applied only to parameters whose gradient was
// touched this step; untouched parameters keep their bytes and moments.
template <typename S>
void adamw_update(nn::ParamStore<S>& params, const TrainConfig& cfg,
                  std::int64_t step) {
  const S lr = static_cast<S>(lr_at_step(cfg, step));
  const S b1 = static_cast<S>(cfg.beta1);
  const S b2 = static_cast<S>(cfg.beta2);
  const S eps = static_cast<S>(cfg.eps);
  const S wd = static_cast<S>(cfg.weight_decay);
  for (std::size_t i = 0; i < params.size(); ++i) {
    nn::Parameter<S>& p = params[i];
    if (!p.trainable || !p.touched) continue;
    if (p.adam_m.size() == 0) {
      p.adam_m = nn::Mat<S>::Zero(p.value.rows(), p.value.cols());
      p.adam_v = nn::Mat<S>::Zero(p.value.rows(), p.value.cols());
    }
    p.adam_steps += 1;
    p.adam_m = b1 * p.adam_m + (S{1} - b1) * p.grad;
    p.adam_v = (b2 * p.adam_v.array() +
                (S{1} - b2) * p.grad.array().square()).matrix();
    const S c1 = S{1} - static_cast<S>(std::pow(static_cast<double>(b1),
                                                static_cast<double>(p.adam_steps)));
    const S c2 = S{1} - static_cast<S>(std::pow(static_cast<double>(b2),
                                                static_cast<double>(p.adam_steps)));
    p.value.array() -= lr * ((p.adam_m.array() / c1) /
                                 ((p.adam_v.array() / c2).sqrt() + eps) +
                             wd * p.value.array());
  }
}

// One optimizer step over a batch of same-task examples. The loss is the mean
// cross-entropy over every labeled position in the batch.
template <typename S>
double train_step(MultiTaskModel<S>& model, const ContextualEncoder<S>& lm,
                  const RuleRegistry& rules, Task task, const Datasets& data,
                  const std::vector<int>& batch, const TrainConfig& cfg,
                  std::int64_t step, Rng& rng) {
  if (batch.empty()) fail_data("empty training batch");
  model.params().clear_step();
  int total_labeled = 0;
  for (int idx : batch) {
    switch (task) {
      case Task::TN:
        total_labeled += static_cast<int>(data.tn.at(static_cast<std::size_t>(idx)).rules.size());
        break;
      case Task::POS:
        total_labeled += static_cast<int>(data.pos.at(static_cast<std::size_t>(idx)).words.size());
        break;
      case Task::HD:
        total_labeled += 1;
        break;
    }
  }
  if (total_labeled <= 0) fail_data("training batch has no labeled positions");
  double batch_loss = 0.0;
  for (int idx : batch) {
    nn::Tape<S> t;
    t.training = true;
    t.rng = &rng;
    t.freeze_stats = cfg.freeze_stats_after > 0 && step > cfg.freeze_stats_after;
    LossGraph<S> g{nn::Var<S>{}, 0};
    switch (task) {
      case Task::TN:
        g = tn_loss(t, model, lm, rules, data.tn.at(static_cast<std::size_t>(idx)));
        break;
      case Task::POS:
        g = pos_loss(t, model, lm, data.pos.at(static_cast<std::size_t>(idx)));
        break;
      case Task::HD:
        g = hd_loss(t, model, lm, data.hd.at(static_cast<std::size_t>(idx)));
        break;
    }
    nn::Var<S> scaled = nn::scale(
        t, g.loss, static_cast<S>(g.labeled) / static_cast<S>(total_labeled));
    batch_loss += static_cast<double>(t.val(scaled)(0, 0));
    t.backward(scaled);
  }
  if (!std::isfinite(batch_loss)) {
    std::ostringstream msg;
    msg << "non-finite loss " << batch_loss << " at step " << step << " (task "
        << task_name(task) << ", lr " << lr_at_step(cfg, step) << ")";
    fail_model(msg.str());
  }
  adamw_update(model.params(), cfg, step);
  return batch_loss;
}

struct ValScores {
  double tn = std::numeric_limits<double>::quiet_NaN();
  double pos = std::numeric_limits<double>::quiet_NaN();
  double hd = std::numeric_limits<double>::quiet_NaN();
};

inline double mean_score(const ValScores& scores, const std::vector<Task>& tasks) {
  double sum = 0.0;
  for (Task task : tasks) {
    switch (task) {
      case Task::TN: sum += scores.tn; break;
      case Task::POS: sum += scores.pos; break;
      case Task::HD: sum += scores.hd; break;
    }
  }
  return sum / static_cast<double>(tasks.size());
}

// Cheap argmax accuracies used to pick the best checkpoint during training.
// Rule accuracy is per labeled token under the applicability mask; tagging and
// homograph accuracy are per word and per occurrence.
template <typename S>
ValScores quick_validation(const MultiTaskModel<S>& model,
                           const ContextualEncoder<S>& lm,
                           const RuleRegistry& rules, const Datasets& val,
                           const std::vector<Task>& tasks) {
  ValScores scores;
  for (Task task : tasks) {
    switch (task) {
      case Task::TN: {
        if (val.tn.empty()) fail_data("no validation data for task tn");
        std::int64_t hit = 0, total = 0;
        for (const TNExample& e : val.tn) {
          const TokenSequence seq = tokenize(e.text);
          const RuleLogits masked =
              mask_logits(model.rule_logits(e.text, lm),
                          rules.applicability_mask(seq));
          for (const auto& [start, rule_id] : e.rules) {
            Eigen::Index best = 0;
            masked.row(start).maxCoeff(&best);
            hit += static_cast<int>(best) == rule_id;
            ++total;
          }
        }
        scores.tn = static_cast<double>(hit) / static_cast<double>(total);
        break;
      }
      case Task::POS: {
        if (val.pos.empty()) fail_data("no validation data for task pos");
        std::int64_t hit = 0, total = 0;
        for (const POSExample& e : val.pos) {
          const std::vector<int> got =
              model.tag_pos(detail::join_words(e.words), lm);
          if (got.size() != e.tags.size())
            fail_data("tagging example words do not survive tokenization");
          for (std::size_t i = 0; i < got.size(); ++i) {
            hit += got[i] == PosTagset::index(e.tags[i]);
            ++total;
          }
        }
        scores.pos = static_cast<double>(hit) / static_cast<double>(total);
        break;
      }
      case Task::HD: {
        if (val.hd.empty()) fail_data("no validation data for task hd");
        std::int64_t hit = 0;
        for (const HDExample& e : val.hd) {
          const int got = model.classify_homograph(
              e.sentence, static_cast<std::size_t>(e.start),
              static_cast<std::size_t>(e.end), e.homograph, lm);
          hit += got == model.lexicon().label_index(e.homograph, e.label);
        }
        scores.hd = static_cast<double>(hit) / static_cast<double>(val.hd.size());
        break;
      }
    }
  }
  return scores;
}

struct TrainResult {
  std::vector<std::string> history;
  double best_score = -std::numeric_limits<double>::infinity();
  std::int64_t best_step = 0;
  double final_loss = 0.0;
};

namespace detail {

// Endless shuffled pass over one dataset's indices; reshuffles per epoch.
class IndexCycler {
 public:
  IndexCycler() = default;
  IndexCycler(int size, Rng& rng) : rng_(&rng), indices_(static_cast<std::size_t>(size)) {
    if (size <= 0) fail_data("cannot train a task with no examples");
    std::iota(indices_.begin(), indices_.end(), 0);
    rng_->shuffle(indices_);
  }
  std::vector<int> next(int count) {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(count));
    while (static_cast<int>(out.size()) < count) {
      if (cursor_ == indices_.size()) {
        rng_->shuffle(indices_);
        cursor_ = 0;
      }
      out.push_back(indices_[cursor_++]);
    }
    return out;
  }

 private:
  Rng* rng_ = nullptr;
  std::vector<int> indices_;
  std::size_t cursor_ = 0;
};

}  // namespace detail

// Round-robin multi-task training. Emits one JSONL history line per step and
// one per validation pass; when `best_path` is non-empty the best model by
// equal-weight mean of the per-task validation scores is checkpointed there.
template <typename S>
TrainResult train_loop(MultiTaskModel<S>& model, const ContextualEncoder<S>& lm,
                       const RuleRegistry& rules, const Datasets& train,
                       const Datasets& val, const TrainConfig& cfg,
                       const std::string& best_path = "",
                       std::ostream* log = nullptr) {
  cfg.validate();
  Rng rng(cfg.seed);
  detail::IndexCycler tn_cycle, pos_cycle, hd_cycle;
  bool has_val = true;
  for (Task task : cfg.tasks) {
    switch (task) {
      case Task::TN:
        tn_cycle = detail::IndexCycler(static_cast<int>(train.tn.size()), rng);
        has_val = has_val && !val.tn.empty();
        break;
      case Task::POS:
        pos_cycle = detail::IndexCycler(static_cast<int>(train.pos.size()), rng);
        has_val = has_val && !val.pos.empty();
        break;
      case Task::HD:
        hd_cycle = detail::IndexCycler(static_cast<int>(train.hd.size()), rng);
        has_val = has_val && !val.hd.empty();
        break;
    }
  }
  TrainResult result;
  for (std::int64_t step = 1; step <= cfg.total_iterations; ++step) {
    const Task task =
        cfg.tasks[static_cast<std::size_t>((step - 1) % cfg.tasks.size())];
    std::vector<int> batch;
    switch (task) {
      case Task::TN: batch = tn_cycle.next(cfg.batch_size); break;
      case Task::POS: batch = pos_cycle.next(cfg.batch_size); break;
      case Task::HD: batch = hd_cycle.next(cfg.batch_size); break;
    }
    const double loss =
        train_step(model, lm, rules, task, train, batch, cfg, step, rng);
    result.final_loss = loss;
    nlohmann::ordered_json line = {{"step", step},
                                   {"task", task_name(task)},
                                   {"loss", loss},
                                   {"lr", lr_at_step(cfg, step)}};
    result.history.push_back(line.dump());
    if (log) (*log) << result.history.back() << '\n';
    const bool at_validation =
        has_val &&
        (step % cfg.validate_every == 0 || step == cfg.total_iterations);
    if (at_validation) {
      const ValScores scores = quick_validation(model, lm, rules, val, cfg.tasks);
      const double score = mean_score(scores, cfg.tasks);
      nlohmann::ordered_json vline = {{"step", step}, {"validation", true}};
      if (!std::isnan(scores.tn)) vline["val_tn"] = scores.tn;
      if (!std::isnan(scores.pos)) vline["val_pos"] = scores.pos;
      if (!std::isnan(scores.hd)) vline["val_hd"] = scores.hd;
      vline["score"] = score;
      result.history.push_back(vline.dump());
      if (log) (*log) << result.history.back() << '\n';
      if (score > result.best_score) {
        result.best_score = score;
        result.best_step = step;
        if (!best_path.empty()) save_checkpoint(best_path, model);
      }
    }
  }
  return result;
}

}  // namespace ttsfe
