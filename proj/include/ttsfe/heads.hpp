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

#include <map>
#include <string>
#include <vector>

#include "ttsfe/common.hpp"
#include "ttsfe/contextual.hpp"
#include "ttsfe/lexicon.hpp"
#include "ttsfe/nn/modules.hpp"
#include "ttsfe/tokenizer.hpp"

namespace ttsfe {

struct HeadConfig {
  int ff_dim = 256;

  void validate() const {
    if (ff_dim <= 0) fail_config("head feed-forward width must be positive");
  }
};

// Shared feed-forward (linear + ReLU) followed by a final linear layer; the
// building block every task head uses.
template <typename Scalar>
class FeedForwardHead {
 public:
  FeedForwardHead() = default;
  FeedForwardHead(nn::ParamStore<Scalar>& ps, const std::string& prefix,
                  int in_dim, int ff_dim, int out_dim)
      : ff_(ps, prefix + ".ff", in_dim, ff_dim),
        out_(ps, prefix + ".out", ff_dim, out_dim) {}

  nn::Var<Scalar> forward(nn::Tape<Scalar>& t, nn::Var<Scalar> x) const {
    return out_.forward(t, nn::relu(t, ff_.forward(t, x)));
  }

 private:
  nn::Linear<Scalar> ff_;
  nn::Linear<Scalar> out_;
};

// Per-position logits over all rules. Masking by applicability happens in
// the decoder, not here.
template <typename Scalar>
class TnHead {
 public:
  TnHead() = default;
  TnHead(nn::ParamStore<Scalar>& ps, const std::string& prefix, int in_dim,
         int rule_count, const HeadConfig& cfg)
      : head_(ps, prefix, in_dim, cfg.ff_dim, rule_count) {
    cfg.validate();
  }

  nn::Var<Scalar> forward(nn::Tape<Scalar>& t, nn::Var<Scalar> e) const {
    if (t.val(e).rows() == 0) fail_model("tn_head: empty embedding sequence");
    return head_.forward(t, e);
  }

 private:
  FeedForwardHead<Scalar> head_;
};

// Validates that `groups` partitions [0, n): every index appears in exactly
// one group and nothing is out of range.
inline void require_partition(const std::vector<std::vector<int>>& groups,
                              int n) {
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  int total = 0;
  for (const auto& g : groups) {
    if (g.empty()) fail_model("word alignment contains an empty group");
    for (int i : g) {
      if (i < 0 || i >= n)
        fail_model("word alignment index out of range");
      if (seen[static_cast<std::size_t>(i)])
        fail_model("word alignment repeats a token index");
      seen[static_cast<std::size_t>(i)] = 1;
      ++total;
    }
  }
  if (total != n) fail_model("word alignment does not cover every token");
}

// Word-level part-of-speech logits: token rows belonging to one word are
// averaged, then classified by a shared feed-forward head.
template <typename Scalar>
class PosHead {
 public:
  PosHead() = default;
  PosHead(nn::ParamStore<Scalar>& ps, const std::string& prefix, int in_dim,
          const HeadConfig& cfg)
      : head_(ps, prefix, in_dim, cfg.ff_dim, PosTagset::kSize) {
    cfg.validate();
  }

  nn::Var<Scalar> forward(nn::Tape<Scalar>& t, nn::Var<Scalar> e,
                          std::vector<std::vector<int>> word_groups) const {
    require_partition(word_groups, static_cast<int>(t.val(e).rows()));
    return head_.forward(t, nn::segment_mean(t, e, std::move(word_groups)));
  }

 private:
  FeedForwardHead<Scalar> head_;
};

// Pronunciation logits for one homograph occurrence. Trunk rows at the
// homograph's token indices are averaged and passed through a shared
// feed-forward; final-layer contextual rows at its subword indices are
// averaged and projected as a skip connection; a per-homograph linear layer
// produces the logits. Every homograph owns its dedicated final layer, so a
// training step on one homograph cannot move another's parameters.
template <typename Scalar>
class HdHead {
 public:
  HdHead() = default;
  HdHead(nn::ParamStore<Scalar>& ps, const std::string& prefix, int in_dim,
         int lm_dim, const HomographLexicon& lexicon, const HeadConfig& cfg)
      : shared_ff_(ps, prefix + ".shared", in_dim, cfg.ff_dim),
        residual_(ps, prefix + ".residual", lm_dim, cfg.ff_dim) {
    cfg.validate();
    for (const HomographEntry& e : lexicon.entries())
      per_homograph_.emplace(
          e.key, nn::Linear<Scalar>(ps, prefix + ".per." + e.key, cfg.ff_dim,
                                    static_cast<int>(e.labels.size())));
  }

  // `use_residual = false` drops the contextual skip connection entirely;
  // the result is then bitwise independent of lm_final.
  nn::Var<Scalar> forward(nn::Tape<Scalar>& t, nn::Var<Scalar> e,
                          const std::vector<int>& tn_indices,
                          nn::Var<Scalar> lm_final,
                          const std::vector<int>& lm_indices,
                          const std::string& homograph,
                          bool use_residual = true) const {
    auto it = per_homograph_.find(homograph);
    if (it == per_homograph_.end())
      fail_data("homograph has no classification head: " + homograph);
    if (tn_indices.empty()) fail_model("hd_head: no token indices");
    nn::Var<Scalar> pooled = nn::segment_mean(t, e, {tn_indices});
    nn::Var<Scalar> h = nn::relu(t, shared_ff_.forward(t, pooled));
    if (use_residual) {
      if (lm_indices.empty()) fail_model("hd_head: no subword indices");
      nn::Var<Scalar> lm_pooled = nn::segment_mean(t, lm_final, {lm_indices});
      h = nn::add(t, h, residual_.forward(t, lm_pooled));
    }
    return it->second.forward(t, h);
  }

 private:
  nn::Linear<Scalar> shared_ff_;
  nn::Linear<Scalar> residual_;
  std::map<std::string, nn::Linear<Scalar>> per_homograph_;
};

// Token and subword indices of a homograph occurrence, by span overlap.
struct HomographLocation {
  std::vector<int> tn_indices;
  std::vector<int> subword_indices;
};

template <typename Scalar>
HomographLocation locate_homograph(const TokenSequence& seq,
                                   const ContextualEncoder<Scalar>& lm,
                                   const std::string& text,
                                   std::size_t span_start,
                                   std::size_t span_end) {
  if (span_end <= span_start)
    fail_data("homograph span is empty or inverted");
  HomographLocation loc;
  for (std::size_t i = 0; i < seq.tokens.size(); ++i) {
    const Token& tok = seq.tokens[i];
    if (tok.start < span_end && span_start < tok.end)
      loc.tn_indices.push_back(static_cast<int>(i));
  }
  const std::vector<Subword> subwords = lm.subword_tokenize(text);
  for (std::size_t i = 0; i < subwords.size(); ++i) {
    const Subword& sw = subwords[i];
    if (sw.start < span_end && span_start < sw.end)
      loc.subword_indices.push_back(static_cast<int>(i));
  }
  if (loc.tn_indices.empty())
    fail_data("homograph span overlaps no tokens");
  if (loc.subword_indices.empty())
    fail_data("homograph span overlaps no subword tokens");
  return loc;
}

}  // namespace ttsfe
