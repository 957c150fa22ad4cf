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
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "ttsfe/common.hpp"
#include "ttsfe/nn/modules.hpp"
#include "ttsfe/unicode.hpp"

namespace ttsfe {

// One subword token with its character span (scalar offsets) into the text.
struct Subword {
  std::string text;
  std::size_t start = 0;
  std::size_t end = 0;
};

// A frozen sentence encoder exposing per-layer token embeddings. Layer
// indices are 1-based. Implementations must be deterministic: the same text
// always yields the same tokens and embeddings.
template <typename Scalar>
class ContextualEncoder {
 public:
  virtual ~ContextualEncoder() = default;
  virtual std::vector<Subword> subword_tokenize(const std::string& text) const = 0;
  virtual nn::Mat<Scalar> layer_embeddings(const std::string& text,
                                           int layer) const = 0;
  virtual int num_layers() const = 0;
  virtual int dim() const = 0;
  virtual bool frozen() const = 0;
};

// Splits on whitespace and breaks punctuation characters into their own
// tokens. Spans are non-overlapping, ordered, and cover every non-whitespace
// character of the text.
std::vector<Subword> whitespace_punct_subwords(const std::string& text);

// Small randomly-initialized transformer encoder standing in for a real
// pre-trained model: fixed seed, frozen weights, hash-bucket subword
// embeddings, sinusoidal positions. Per-text layer outputs are cached since
// frozen weights make them constant.
template <typename Scalar>
class DeskContextualEncoder final : public ContextualEncoder<Scalar> {
 public:
  static constexpr int kBuckets = 1024;
  static constexpr int kHeads = 4;
  static constexpr int kFeedForward = 128;

  explicit DeskContextualEncoder(std::uint64_t seed = 7042, int dim = 64,
                                 int layers = 12)
      : seed_(seed), dim_(dim), layers_(layers), params_(seed) {
    if (dim <= 0 || layers <= 0 || dim % kHeads != 0)
      fail_config("contextual encoder dimensions are invalid");
    embed_ = nn::Embedding<Scalar>(params_, "lm.embed", kBuckets, dim);
    for (int i = 0; i < layers; ++i)
      blocks_.emplace_back(params_, "lm.block" + std::to_string(i), dim,
                           kHeads, kFeedForward, 0.0);
    params_.freeze_all();
  }

  std::vector<Subword> subword_tokenize(const std::string& text) const override {
    return whitespace_punct_subwords(text);
  }

  nn::Mat<Scalar> layer_embeddings(const std::string& text,
                                   int layer) const override {
    if (layer < 1 || layer > layers_)
      fail_config("contextual encoder layer index out of range");
    auto it = cache_.find(text);
    if (it == cache_.end()) it = cache_.emplace(text, encode(text)).first;
    return it->second[static_cast<std::size_t>(layer - 1)];
  }

  int num_layers() const override { return layers_; }
  int dim() const override { return dim_; }
  bool frozen() const override { return true; }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t checksum() const { return params_.checksum(); }

 private:
  std::vector<nn::Mat<Scalar>> encode(const std::string& text) const {
    const std::vector<Subword> subwords = subword_tokenize(text);
    if (subwords.empty())
      fail_data("text has no subword tokens: \"" + text + "\"");
    std::vector<int> ids;
    ids.reserve(subwords.size());
    for (const Subword& sw : subwords)
      ids.push_back(static_cast<int>(fnv1a64(sw.text) % kBuckets));
    nn::Tape<Scalar> t;
    nn::Var<Scalar> x = embed_.forward(t, ids);
    x = nn::add_positions(t, x);
    std::vector<nn::Mat<Scalar>> out;
    out.reserve(static_cast<std::size_t>(layers_));
    for (const auto& block : blocks_) {
      x = block.forward(t, x);
      out.push_back(t.val(x));
    }
    return out;
  }

  std::uint64_t seed_;
  int dim_;
  int layers_;
  mutable nn::ParamStore<Scalar> params_;
  nn::Embedding<Scalar> embed_;
  std::vector<nn::TransformerLayer<Scalar>> blocks_;
  mutable std::map<std::string, std::vector<nn::Mat<Scalar>>> cache_;
};

}  // namespace ttsfe
