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
#include <string>
#include <vector>

#include "ttsfe/nn/ops.hpp"
#include "ttsfe/nn/tape.hpp"

namespace ttsfe::nn {

template <typename S>
class Linear {
 public:
  Linear() = default;
  Linear(ParamStore<S>& ps, const std::string& prefix, int in, int out)
      : w_(&ps.create(prefix + ".weight", in, out)),
        b_(&ps.create(prefix + ".bias", 1, out, ParamStore<S>::Init::Zero)) {}

  Var<S> forward(Tape<S>& t, Var<S> x) const {
    return add_rowvec(t, matmul(t, x, t.leaf(*w_)), t.leaf(*b_));
  }

 private:
  Parameter<S>* w_ = nullptr;
  Parameter<S>* b_ = nullptr;
};

template <typename S>
class LayerNorm {
 public:
  LayerNorm() = default;
  LayerNorm(ParamStore<S>& ps, const std::string& prefix, int dim)
      : gamma_(&ps.create(prefix + ".gain", 1, dim, ParamStore<S>::Init::One)),
        beta_(&ps.create(prefix + ".bias", 1, dim, ParamStore<S>::Init::Zero)) {}

  Var<S> forward(Tape<S>& t, Var<S> x) const {
    return layer_norm(t, x, t.leaf(*gamma_), t.leaf(*beta_));
  }

 private:
  Parameter<S>* gamma_ = nullptr;
  Parameter<S>* beta_ = nullptr;
};

// Feature-wise normalization with running statistics for inference. The
// running estimates live in the parameter store as non-trainable tensors so
// checkpoints carry them.
template <typename S>
class BatchNorm {
 public:
  BatchNorm() = default;
  BatchNorm(ParamStore<S>& ps, const std::string& prefix, int dim,
            S momentum = S(0.1))
      : gamma_(&ps.create(prefix + ".gain", 1, dim, ParamStore<S>::Init::One)),
        beta_(&ps.create(prefix + ".bias", 1, dim, ParamStore<S>::Init::Zero)),
        running_mean_(&ps.create(prefix + ".running_mean", 1, dim,
                                 ParamStore<S>::Init::Zero, false)),
        running_var_(&ps.create(prefix + ".running_var", 1, dim,
                                ParamStore<S>::Init::One, false)),
        momentum_(momentum) {}

  Var<S> forward(Tape<S>& t, Var<S> x) const {
    if (t.training && !t.freeze_stats) {
      Mat<S> mu, var;
      Var<S> out = batch_norm_train(t, x, t.leaf(*gamma_), t.leaf(*beta_),
                                    &mu, &var);
      running_mean_->value =
          (S(1) - momentum_) * running_mean_->value + momentum_ * mu;
      running_var_->value =
          (S(1) - momentum_) * running_var_->value + momentum_ * var;
      return out;
    }
    return batch_norm_eval(t, x, t.leaf(*gamma_), t.leaf(*beta_),
                           running_mean_->value, running_var_->value);
  }

 private:
  Parameter<S>* gamma_ = nullptr;
  Parameter<S>* beta_ = nullptr;
  Parameter<S>* running_mean_ = nullptr;
  Parameter<S>* running_var_ = nullptr;
  S momentum_ = S(0.1);
};

template <typename S>
class Embedding {
 public:
  Embedding() = default;
  Embedding(ParamStore<S>& ps, const std::string& prefix, int vocab, int dim)
      : table_(&ps.create(prefix + ".table", vocab, dim)) {}

  Var<S> forward(Tape<S>& t, const std::vector<int>& ids) const {
    return gather_rows(t, t.leaf(*table_), ids);
  }

  int vocab() const { return static_cast<int>(table_->value.rows()); }

 private:
  Parameter<S>* table_ = nullptr;
};

// Width-k convolution over rows realized as unfold + matmul, followed by
// batch normalization, ReLU, and dropout.
template <typename S>
class ConvBlock {
 public:
  ConvBlock() = default;
  ConvBlock(ParamStore<S>& ps, const std::string& prefix, int in, int out,
            int kernel, double dropout_rate)
      : proj_(ps, prefix + ".proj", kernel * in, out),
        norm_(ps, prefix + ".norm", out),
        kernel_(kernel),
        dropout_(dropout_rate) {}

  Var<S> forward(Tape<S>& t, Var<S> x) const {
    return forward_unfolded(t, unfold_rows(t, x, kernel_));
  }

  // Input must already be unfolded to rows of width kernel * in_channels;
  // callers that window within segments unfold piecewise themselves.
  Var<S> forward_unfolded(Tape<S>& t, Var<S> unfolded) const {
    Var<S> y = proj_.forward(t, unfolded);
    y = relu(t, norm_.forward(t, y));
    return dropout(t, y, dropout_);
  }

  int kernel() const { return kernel_; }

 private:
  Linear<S> proj_;
  BatchNorm<S> norm_;
  int kernel_ = 0;
  double dropout_ = 0.0;
};

// Single-direction LSTM over rows. Gate layout in the fused projection is
// input, forget, cell, output; the forget gate bias starts at one.
template <typename S>
class Lstm {
 public:
  Lstm() = default;
  Lstm(ParamStore<S>& ps, const std::string& prefix, int in, int hidden,
       bool reverse)
      : wx_(&ps.create(prefix + ".input_weight", in, 4 * hidden)),
        wh_(&ps.create(prefix + ".state_weight", hidden, 4 * hidden)),
        b_(&ps.create(prefix + ".bias", 1, 4 * hidden,
                      ParamStore<S>::Init::Zero)),
        hidden_(hidden),
        reverse_(reverse) {
    b_->value.block(0, hidden, 1, hidden).setOnes();
  }

  Var<S> forward(Tape<S>& t, Var<S> x) const {
    const int n = static_cast<int>(t.val(x).rows());
    if (n == 0) fail_model("lstm: empty sequence");
    Var<S> wx = t.leaf(*wx_);
    Var<S> wh = t.leaf(*wh_);
    Var<S> b = t.leaf(*b_);
    Var<S> h = t.constant(Mat<S>::Zero(1, hidden_));
    Var<S> c = t.constant(Mat<S>::Zero(1, hidden_));
    std::vector<Var<S>> states;
    states.reserve(static_cast<std::size_t>(n));
    for (int step = 0; step < n; ++step) {
      const int row = reverse_ ? n - 1 - step : step;
      Var<S> xt = gather_rows(t, x, {row});
      Var<S> z =
          add_rowvec(t, add(t, matmul(t, xt, wx), matmul(t, h, wh)), b);
      Var<S> gi = sigmoid(t, slice_cols(t, z, 0, hidden_));
      Var<S> gf = sigmoid(t, slice_cols(t, z, hidden_, hidden_));
      Var<S> gc = tanh_act(t, slice_cols(t, z, 2 * hidden_, hidden_));
      Var<S> go = sigmoid(t, slice_cols(t, z, 3 * hidden_, hidden_));
      c = add(t, cmul(t, gf, c), cmul(t, gi, gc));
      h = cmul(t, go, tanh_act(t, c));
      states.push_back(h);
    }
    if (reverse_) std::reverse(states.begin(), states.end());
    return stack_rows(t, states);
  }

 private:
  Parameter<S>* wx_ = nullptr;
  Parameter<S>* wh_ = nullptr;
  Parameter<S>* b_ = nullptr;
  int hidden_ = 0;
  bool reverse_ = false;
};

template <typename S>
class BiLstm {
 public:
  BiLstm() = default;
  BiLstm(ParamStore<S>& ps, const std::string& prefix, int in, int hidden)
      : fwd_(ps, prefix + ".fwd", in, hidden, false),
        bwd_(ps, prefix + ".bwd", in, hidden, true) {}

  Var<S> forward(Tape<S>& t, Var<S> x) const {
    return concat_cols(t, fwd_.forward(t, x), bwd_.forward(t, x));
  }

 private:
  Lstm<S> fwd_;
  Lstm<S> bwd_;
};

template <typename S>
class MultiHeadAttention {
 public:
  MultiHeadAttention() = default;
  MultiHeadAttention(ParamStore<S>& ps, const std::string& prefix, int dim,
                     int heads)
      : q_(ps, prefix + ".q", dim, dim),
        k_(ps, prefix + ".k", dim, dim),
        v_(ps, prefix + ".v", dim, dim),
        o_(ps, prefix + ".o", dim, dim),
        dim_(dim),
        heads_(heads) {
    if (heads <= 0 || dim % heads != 0)
      fail_config("attention width must be divisible by the head count");
  }

  // Queries come from `q_in` (n x dim); keys and values from `kv_in`
  // (m x dim). Output is n x dim for any m >= 1.
  Var<S> forward(Tape<S>& t, Var<S> q_in, Var<S> kv_in) const {
    Var<S> q = q_.forward(t, q_in);
    Var<S> k = k_.forward(t, kv_in);
    Var<S> v = v_.forward(t, kv_in);
    const int dk = dim_ / heads_;
    const S inv_sqrt = S(1.0 / std::sqrt(static_cast<double>(dk)));
    Var<S> merged{};
    for (int h = 0; h < heads_; ++h) {
      Var<S> qh = slice_cols(t, q, h * dk, dk);
      Var<S> kh = slice_cols(t, k, h * dk, dk);
      Var<S> vh = slice_cols(t, v, h * dk, dk);
      Var<S> probs = softmax_rows(
          t, scale(t, matmul(t, qh, transpose(t, kh)), inv_sqrt));
      Var<S> head = matmul(t, probs, vh);
      merged = h == 0 ? head : concat_cols(t, merged, head);
    }
    return o_.forward(t, merged);
  }

 private:
  Linear<S> q_;
  Linear<S> k_;
  Linear<S> v_;
  Linear<S> o_;
  int dim_ = 0;
  int heads_ = 0;
};

// Pre-norm transformer encoder layer with a two-layer feed-forward block.
template <typename S>
class TransformerLayer {
 public:
  TransformerLayer() = default;
  TransformerLayer(ParamStore<S>& ps, const std::string& prefix, int dim,
                   int heads, int ff_dim, double dropout_rate)
      : attn_(ps, prefix + ".attn", dim, heads),
        ln_attn_(ps, prefix + ".attn_norm", dim),
        ff1_(ps, prefix + ".ff1", dim, ff_dim),
        ff2_(ps, prefix + ".ff2", ff_dim, dim),
        ln_ff_(ps, prefix + ".ff_norm", dim),
        dropout_(dropout_rate) {}

  Var<S> forward(Tape<S>& t, Var<S> x) const {
    Var<S> q = ln_attn_.forward(t, x);
    Var<S> a = add(t, x, dropout(t, attn_.forward(t, q, q), dropout_));
    Var<S> f = ff2_.forward(t, relu(t, ff1_.forward(t, ln_ff_.forward(t, a))));
    return add(t, a, dropout(t, f, dropout_));
  }

 private:
  MultiHeadAttention<S> attn_;
  LayerNorm<S> ln_attn_;
  Linear<S> ff1_;
  Linear<S> ff2_;
  LayerNorm<S> ln_ff_;
  double dropout_ = 0.0;
};

// Pre-norm cross-attention block: queries from the first stream, keys and
// values from a projection of the second stream. Output keeps the query
// stream's length and width.
template <typename S>
class CrossAttentionBlock {
 public:
  CrossAttentionBlock() = default;
  CrossAttentionBlock(ParamStore<S>& ps, const std::string& prefix, int dim,
                      int kv_dim, int heads, int ff_dim, double dropout_rate)
      : kv_proj_(ps, prefix + ".kv_proj", kv_dim, dim),
        attn_(ps, prefix + ".attn", dim, heads),
        ln_q_(ps, prefix + ".q_norm", dim),
        ln_kv_(ps, prefix + ".kv_norm", dim),
        ff1_(ps, prefix + ".ff1", dim, ff_dim),
        ff2_(ps, prefix + ".ff2", ff_dim, dim),
        ln_ff_(ps, prefix + ".ff_norm", dim),
        dropout_(dropout_rate) {}

  Var<S> forward(Tape<S>& t, Var<S> queries, Var<S> context) const {
    Var<S> kv = ln_kv_.forward(t, kv_proj_.forward(t, context));
    Var<S> a = add(
        t, queries,
        dropout(t, attn_.forward(t, ln_q_.forward(t, queries), kv), dropout_));
    Var<S> f = ff2_.forward(t, relu(t, ff1_.forward(t, ln_ff_.forward(t, a))));
    return add(t, a, dropout(t, f, dropout_));
  }

 private:
  Linear<S> kv_proj_;
  MultiHeadAttention<S> attn_;
  LayerNorm<S> ln_q_;
  LayerNorm<S> ln_kv_;
  Linear<S> ff1_;
  Linear<S> ff2_;
  LayerNorm<S> ln_ff_;
  double dropout_ = 0.0;
};

}  // namespace ttsfe::nn
