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
#include <vector>

#include "ttsfe/common.hpp"
#include "ttsfe/contextual.hpp"
#include "ttsfe/nn/modules.hpp"
#include "ttsfe/tokenizer.hpp"
#include "ttsfe/unicode.hpp"

namespace ttsfe {

// Hyperparameters of the shared trunk.
struct TrunkConfig {
  int char_emb_dim = 32;
  int conv_layers = 1;
  int conv_channels = 64;
  int conv_kernel = 5;
  double conv_dropout = 0.2;
  int lstm_hidden = 128;
  int xformer_hidden = 256;
  int attn_heads = 4;
  double xformer_dropout = 0.1;
  int lm_first_layer = 1;
  int lm_last_layer = 12;
  int lm_dim = 64;
  std::uint64_t seed = 0;

  void validate() const {
    if (char_emb_dim <= 0 || conv_layers <= 0 || conv_channels <= 0 ||
        lstm_hidden <= 0 || xformer_hidden <= 0 || attn_heads <= 0 ||
        lm_dim <= 0)
      fail_config("trunk dimensions must be positive");
    if (conv_kernel <= 0 || conv_kernel % 2 == 0)
      fail_config("convolution kernel must be odd and positive");
    if (xformer_hidden % attn_heads != 0)
      fail_config("attention width must be divisible by the head count");
    if (conv_dropout < 0.0 || conv_dropout >= 1.0 || xformer_dropout < 0.0 ||
        xformer_dropout >= 1.0)
      fail_config("dropout rates must lie in [0, 1)");
    if (lm_first_layer < 1 || lm_last_layer < lm_first_layer)
      fail_config("contextual layer taps are out of order");
    if (2 * lstm_hidden != xformer_hidden)
      fail_config("bidirectional recurrent width must equal the "
                  "transformer width");
  }
};

// Sequence of real-valued embeddings, one row per token.
template <typename Scalar>
struct EmbeddingSequence {
  nn::Mat<Scalar> values;
  Eigen::Index length() const { return values.rows(); }
  Eigen::Index dim() const { return values.cols(); }
};

// Character hash buckets: every unicode scalar maps into kCharBuckets via
// FNV-1a; values outside the scalar range get the dedicated overflow bucket.
inline constexpr int kCharBuckets = 512;

inline int char_bucket(char32_t cp) {
  if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return kCharBuckets;
  const std::uint32_t v = static_cast<std::uint32_t>(cp);
  return static_cast<int>(fnv1a64(&v, sizeof(v)) % kCharBuckets);
}

inline std::vector<int> char_bucket_ids(const std::string& token_text) {
  std::vector<int> ids;
  for (char32_t cp : decode_utf8(token_text)) ids.push_back(char_bucket(cp));
  return ids;
}

// Shared trunk: a character-level stream over TN tokens fused with a frozen
// contextual-encoder stream through cross-attention.
//
// Character embeddings feed a convolution stack (batch-normalized, ReLU,
// dropout when training), are mean-pooled per token, then pass a Bi-LSTM and
// one pre-norm transformer layer to give e_t (n x 256). Sinusoidal position
// codes are added before the transformer layer and again before
// cross-attention. cross_attend fuses e_t with projected context embeddings,
// keeping length n.
template <typename Scalar>
class Trunk {
 public:
  Trunk() = default;

  Trunk(nn::ParamStore<Scalar>& ps, const std::string& prefix,
        const TrunkConfig& cfg)
      : cfg_(cfg) {
    cfg.validate();
    char_emb_ = nn::Embedding<Scalar>(ps, prefix + ".char_emb",
                                      kCharBuckets + 1, cfg.char_emb_dim);
    int in = cfg.char_emb_dim;
    for (int i = 0; i < cfg.conv_layers; ++i) {
      convs_.emplace_back(ps, prefix + ".conv" + std::to_string(i), in,
                          cfg.conv_channels, cfg.conv_kernel,
                          cfg.conv_dropout);
      in = cfg.conv_channels;
    }
    lstm_ = nn::BiLstm<Scalar>(ps, prefix + ".lstm", cfg.conv_channels,
                               cfg.lstm_hidden);
    xformer_ = nn::TransformerLayer<Scalar>(ps, prefix + ".xformer",
                                            cfg.xformer_hidden, cfg.attn_heads,
                                            cfg.xformer_hidden,
                                            cfg.xformer_dropout);
    cross_ = nn::CrossAttentionBlock<Scalar>(
        ps, prefix + ".cross", cfg.xformer_hidden, cfg.lm_dim, cfg.attn_heads,
        cfg.xformer_hidden, cfg.xformer_dropout);
  }

  const TrunkConfig& config() const { return cfg_; }

  nn::Var<Scalar> encode_tn_stream(nn::Tape<Scalar>& t,
                                   const TokenSequence& seq) const {
    if (seq.empty()) fail_model("encode_tn_stream: empty token sequence");
    // Embed every token's characters into one stacked matrix while keeping
    // per-token row ranges so convolution windows never cross tokens.
    std::vector<int> all_ids;
    std::vector<std::pair<int, int>> ranges;
    for (const Token& tok : seq.tokens) {
      const std::vector<int> ids = char_bucket_ids(tok.text);
      if (ids.empty()) fail_model("encode_tn_stream: token with no characters");
      ranges.emplace_back(static_cast<int>(all_ids.size()),
                          static_cast<int>(ids.size()));
      all_ids.insert(all_ids.end(), ids.begin(), ids.end());
    }
    nn::Var<Scalar> x = char_emb_.forward(t, all_ids);
    for (const auto& conv : convs_) x = conv_per_token(t, conv, x, ranges);
    std::vector<std::vector<int>> groups;
    for (const auto& [begin, len] : ranges) {
      std::vector<int> g(static_cast<std::size_t>(len));
      for (int i = 0; i < len; ++i) g[static_cast<std::size_t>(i)] = begin + i;
      groups.push_back(std::move(g));
    }
    nn::Var<Scalar> pooled = nn::segment_mean(t, x, std::move(groups));
    nn::Var<Scalar> seq_emb = lstm_.forward(t, pooled);
    return xformer_.forward(t, nn::add_positions(t, seq_emb));
  }

  nn::Var<Scalar> cross_attend(nn::Tape<Scalar>& t, nn::Var<Scalar> e_t,
                               nn::Var<Scalar> e_a) const {
    if (t.val(e_t).rows() == 0) fail_model("cross_attend: empty query stream");
    if (t.val(e_a).rows() == 0)
      fail_model("cross_attend: empty context stream");
    if (t.val(e_t).cols() != cfg_.xformer_hidden)
      fail_model("cross_attend: query width mismatch");
    if (t.val(e_a).cols() != cfg_.lm_dim)
      fail_model("cross_attend: context width mismatch");
    return cross_.forward(t, nn::add_positions(t, e_t), e_a);
  }

  nn::Var<Scalar> forward(nn::Tape<Scalar>& t, const TokenSequence& seq,
                          nn::Var<Scalar> e_a) const {
    return cross_attend(t, encode_tn_stream(t, seq), e_a);
  }

 private:
  nn::Var<Scalar> conv_per_token(
      nn::Tape<Scalar>& t, const nn::ConvBlock<Scalar>& conv, nn::Var<Scalar> x,
      const std::vector<std::pair<int, int>>& ranges) const {
    std::vector<nn::Var<Scalar>> pieces;
    pieces.reserve(ranges.size());
    for (const auto& [begin, len] : ranges) {
      std::vector<int> rows(static_cast<std::size_t>(len));
      for (int i = 0; i < len; ++i) rows[static_cast<std::size_t>(i)] = begin + i;
      pieces.push_back(
          nn::unfold_rows(t, nn::gather_rows(t, x, std::move(rows)),
                          cfg_.conv_kernel));
    }
    return conv.forward_unfolded(t, nn::concat_rows_list(t, pieces));
  }

  TrunkConfig cfg_;
  nn::Embedding<Scalar> char_emb_;
  std::vector<nn::ConvBlock<Scalar>> convs_;
  nn::BiLstm<Scalar> lstm_;
  nn::TransformerLayer<Scalar> xformer_;
  nn::CrossAttentionBlock<Scalar> cross_;
};

// Embeddings of the frozen contextual stream at a 1-based layer tap. No
// gradient can flow into the encoder: results enter graphs as constants.
template <typename Scalar>
EmbeddingSequence<Scalar> encode_lm_stream(const std::string& text,
                                           const ContextualEncoder<Scalar>& lm,
                                           int layer) {
  if (layer < 1 || layer > lm.num_layers())
    fail_config("contextual layer index out of range");
  EmbeddingSequence<Scalar> out{lm.layer_embeddings(text, layer)};
  if (!out.values.allFinite())
    fail_model("contextual embeddings are not finite");
  return out;
}

}  // namespace ttsfe
