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
#include <string>
#include <utility>
#include <vector>

#include "ttsfe/common.hpp"
#include "ttsfe/contextual.hpp"
#include "ttsfe/decoder.hpp"
#include "ttsfe/encoder.hpp"
#include "ttsfe/heads.hpp"
#include "ttsfe/lexicon.hpp"
#include "ttsfe/rules.hpp"
#include "ttsfe/tokenizer.hpp"

namespace ttsfe {

// Everything needed to rebuild a model skeleton: trunk and head widths plus
// the frozen contextual encoder's identity.
struct ModelConfig {
  TrunkConfig trunk;
  HeadConfig head;
  std::uint64_t lm_seed = 7042;

  void validate() const {
    trunk.validate();
    head.validate();
  }
};

// The multi-task front end: one shared trunk and three task heads over a
// frozen contextual encoder. Heads never share final layers, so training a
// batch of one task leaves the other heads' parameters untouched.
template <typename Scalar>
class MultiTaskModel {
 public:
  MultiTaskModel(const ModelConfig& cfg, const RuleRegistry& rules,
                 HomographLexicon lexicon)
      : cfg_(cfg),
        lexicon_(std::move(lexicon)),
        rule_count_(rules.size()),
        ruleset_hash_(rules.manifest_hash()),
        params_(cfg.trunk.seed) {
    cfg.validate();
    trunk_ = Trunk<Scalar>(params_, "trunk", cfg.trunk);
    tn_head_ = TnHead<Scalar>(params_, "heads.tn", cfg.trunk.xformer_hidden,
                              rule_count_, cfg.head);
    pos_head_ = PosHead<Scalar>(params_, "heads.pos", cfg.trunk.xformer_hidden,
                                cfg.head);
    hd_head_ = HdHead<Scalar>(params_, "heads.hd", cfg.trunk.xformer_hidden,
                              cfg.trunk.lm_dim, lexicon_, cfg.head);
  }

  const ModelConfig& config() const { return cfg_; }
  const HomographLexicon& lexicon() const { return lexicon_; }
  int rule_count() const { return rule_count_; }
  std::uint64_t ruleset_hash() const { return ruleset_hash_; }
  nn::ParamStore<Scalar>& params() { return params_; }
  const nn::ParamStore<Scalar>& params() const { return params_; }
  const Trunk<Scalar>& trunk() const { return trunk_; }

  DeskContextualEncoder<Scalar> make_context_encoder() const {
    return DeskContextualEncoder<Scalar>(cfg_.lm_seed, cfg_.trunk.lm_dim,
                                         cfg_.trunk.lm_last_layer);
  }

  // Graph-building forwards (shared by training and inference).

  nn::Var<Scalar> encode(nn::Tape<Scalar>& t, const TokenSequence& seq,
                         nn::Var<Scalar> e_a) const {
    return trunk_.forward(t, seq, e_a);
  }

  nn::Var<Scalar> first_layer_context(nn::Tape<Scalar>& t,
                                      const std::string& text,
                                      const ContextualEncoder<Scalar>& lm) const {
    return t.constant(
        encode_lm_stream(text, lm, cfg_.trunk.lm_first_layer).values);
  }

  nn::Var<Scalar> final_layer_context(nn::Tape<Scalar>& t,
                                      const std::string& text,
                                      const ContextualEncoder<Scalar>& lm) const {
    return t.constant(
        encode_lm_stream(text, lm, cfg_.trunk.lm_last_layer).values);
  }

  nn::Var<Scalar> tn_logits(nn::Tape<Scalar>& t, nn::Var<Scalar> fused) const {
    return tn_head_.forward(t, fused);
  }

  nn::Var<Scalar> pos_logits(nn::Tape<Scalar>& t, nn::Var<Scalar> fused,
                             std::vector<std::vector<int>> word_align) const {
    return pos_head_.forward(t, fused, std::move(word_align));
  }

  nn::Var<Scalar> hd_logits(nn::Tape<Scalar>& t, nn::Var<Scalar> fused,
                            const HomographLocation& loc,
                            nn::Var<Scalar> lm_final,
                            const std::string& homograph,
                            bool use_residual = true) const {
    return hd_head_.forward(t, fused, loc.tn_indices, lm_final,
                            loc.subword_indices, homograph, use_residual);
  }

  // Inference conveniences (evaluation mode, double-precision logits).

  RuleLogits rule_logits(const std::string& text,
                         const ContextualEncoder<Scalar>& lm) const {
    const TokenSequence seq = tokenize(text);
    if (seq.empty()) fail_data("cannot normalize empty text: \"" + text + "\"");
    nn::Tape<Scalar> t;
    nn::Var<Scalar> fused = encode(t, seq, first_layer_context(t, text, lm));
    nn::Var<Scalar> logits = tn_logits(t, fused);
    return t.val(logits).template cast<double>();
  }

  NormalizationPlan plan_normalization(const std::string& text,
                                       const RuleRegistry& rules,
                                       const ContextualEncoder<Scalar>& lm,
                                       int beam_width = 8) const {
    if (rules.manifest_hash() != ruleset_hash_)
      fail_config("ruleset manifest does not match the model");
    const TokenSequence seq = tokenize(text);
    if (seq.empty()) fail_data("cannot normalize empty text: \"" + text + "\"");
    const RuleLogits scores = masked_log_softmax(
        mask_logits(rule_logits(text, lm), rules.applicability_mask(seq)));
    return beam_search(scores, seq, rules, beam_width);
  }

  std::string normalize(const std::string& text, const RuleRegistry& rules,
                        const ContextualEncoder<Scalar>& lm,
                        int beam_width = 8) const {
    const TokenSequence seq = tokenize(text);
    if (seq.empty()) fail_data("cannot normalize empty text: \"" + text + "\"");
    return render(plan_normalization(text, rules, lm, beam_width), seq, rules);
  }

  // One POS label index per word.
  std::vector<int> tag_pos(const std::string& text,
                           const ContextualEncoder<Scalar>& lm) const {
    const TokenSequence seq = tokenize(text);
    if (seq.empty()) fail_data("cannot tag empty text: \"" + text + "\"");
    nn::Tape<Scalar> t;
    nn::Var<Scalar> fused = encode(t, seq, first_layer_context(t, text, lm));
    nn::Var<Scalar> logits = pos_logits(t, fused, word_groups(seq));
    const nn::Mat<Scalar>& lv = t.val(logits);
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(lv.rows()));
    for (Eigen::Index r = 0; r < lv.rows(); ++r) {
      Eigen::Index best = 0;
      lv.row(r).maxCoeff(&best);
      out.push_back(static_cast<int>(best));
    }
    return out;
  }

  // Pronunciation label index for one homograph occurrence.
  int classify_homograph(const std::string& text, std::size_t span_start,
                         std::size_t span_end, const std::string& homograph,
                         const ContextualEncoder<Scalar>& lm,
                         bool use_residual = true) const {
    const TokenSequence seq = tokenize(text);
    if (seq.empty()) fail_data("cannot classify empty text: \"" + text + "\"");
    const HomographLocation loc =
        locate_homograph(seq, lm, text, span_start, span_end);
    nn::Tape<Scalar> t;
    nn::Var<Scalar> fused = encode(t, seq, first_layer_context(t, text, lm));
    nn::Var<Scalar> logits =
        hd_logits(t, fused, loc, final_layer_context(t, text, lm), homograph,
                  use_residual);
    const nn::Mat<Scalar>& lv = t.val(logits);
    Eigen::Index best = 0;
    lv.row(0).maxCoeff(&best);
    return static_cast<int>(best);
  }

 private:
  ModelConfig cfg_;
  HomographLexicon lexicon_;
  int rule_count_ = 0;
  std::uint64_t ruleset_hash_ = 0;
  nn::ParamStore<Scalar> params_;
  Trunk<Scalar> trunk_;
  TnHead<Scalar> tn_head_;
  PosHead<Scalar> pos_head_;
  HdHead<Scalar> hd_head_;
};

}  // namespace ttsfe
