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
#include <deque>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "ttsfe/common.hpp"

namespace ttsfe::nn {

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

// A named trainable tensor with its gradient accumulator and optimizer state.
// `touched` marks parameters that received gradient in the current step; the
// optimizer updates only those, so unrelated heads stay bitwise unchanged.
template <typename Scalar>
struct Parameter {
  std::string name;
  Mat<Scalar> value;
  Mat<Scalar> grad;
  Mat<Scalar> adam_m;
  Mat<Scalar> adam_v;
  std::int64_t adam_steps = 0;
  bool trainable = true;
  bool touched = false;

  void accumulate(const Mat<Scalar>& g) {
    if (grad.size() == 0) grad = Mat<Scalar>::Zero(value.rows(), value.cols());
    grad += g;
    touched = true;
  }

  void clear_step() {
    if (grad.size()) grad.setZero();
    touched = false;
  }
};

// Handle to a node on a tape. Plain index; cheap to copy.
template <typename Scalar>
struct Var {
  int i = -1;
  bool valid() const { return i >= 0; }
};

// Reverse-mode autodiff tape over dense matrices. Nodes are created in
// topological order by construction; backward() walks them in reverse and
// calls each node's pullback once with its fully accumulated gradient.
template <typename Scalar>
class Tape {
 public:
  using M = Mat<Scalar>;
  using Backward = std::function<void(Tape&, const M&)>;

  bool training = false;
  Rng* rng = nullptr;
  // Training-mode switch for the late phase of a run: normalization layers
  // consume their running statistics (and stop updating them) so the network
  // adapts to the exact statistics inference will use.
  bool freeze_stats = false;

  int upcoming() const { return static_cast<int>(nodes_.size()); }

  Var<Scalar> push(M value, bool needs_grad, Backward backward) {
    Node node;
    node.value = std::move(value);
    node.needs_grad = needs_grad;
    node.backward = std::move(backward);
    nodes_.push_back(std::move(node));
    return {static_cast<int>(nodes_.size()) - 1};
  }

  Var<Scalar> constant(M value) { return push(std::move(value), false, nullptr); }

  Var<Scalar> leaf(Parameter<Scalar>& p) {
    Parameter<Scalar>* ptr = &p;
    return push(
        p.value, p.trainable,
        [ptr](Tape&, const M& g) { ptr->accumulate(g); });
  }

  const M& val(Var<Scalar> v) const { return nodes_[check(v)].value; }
  bool needs_grad(Var<Scalar> v) const { return nodes_[check(v)].needs_grad; }

  void accumulate(Var<Scalar> v, const M& g) {
    Node& node = nodes_[check(v)];
    if (!node.needs_grad) return;
    if (node.value.rows() != g.rows() || node.value.cols() != g.cols())
      fail_model("gradient shape mismatch on tape node");
    if (node.grad.size() == 0)
      node.grad = M::Zero(node.value.rows(), node.value.cols());
    node.grad += g;
  }

  // Seeds d(loss)/d(loss) = 1 and propagates to every reachable parameter.
  void backward(Var<Scalar> loss) {
    const Node& top = nodes_[check(loss)];
    if (top.value.rows() != 1 || top.value.cols() != 1)
      fail_model("backward() expects a scalar loss node");
    accumulate(loss, M::Ones(1, 1));
    for (int i = static_cast<int>(nodes_.size()) - 1; i >= 0; --i) {
      Node& node = nodes_[static_cast<std::size_t>(i)];
      if (node.grad.size() == 0 || !node.backward) continue;
      node.backward(*this, node.grad);
    }
  }

 private:
  struct Node {
    M value;
    M grad;
    Backward backward;
    bool needs_grad = false;
  };

  std::size_t check(Var<Scalar> v) const {
    if (v.i < 0 || v.i >= static_cast<int>(nodes_.size()))
      fail_model("invalid tape node handle");
    return static_cast<std::size_t>(v.i);
  }

  std::deque<Node> nodes_;
};

// Owns every parameter of a model, keyed by a stable hierarchical name.
// Creation order is recorded so checkpoints and updates are deterministic.
template <typename Scalar>
class ParamStore {
 public:
  enum class Init { Zero, One, Glorot };

  explicit ParamStore(std::uint64_t seed = 0) : seed_(seed) {}

  Parameter<Scalar>& create(const std::string& name, int rows, int cols,
                            Init init = Init::Glorot, bool trainable = true) {
    if (index_.count(name)) fail_model("duplicate parameter name: " + name);
    params_.emplace_back();
    Parameter<Scalar>& p = params_.back();
    p.name = name;
    p.trainable = trainable;
    p.value.resize(rows, cols);
    switch (init) {
      case Init::Zero:
        p.value.setZero();
        break;
      case Init::One:
        p.value.setOnes();
        break;
      case Init::Glorot: {
        // Seeded by name so initialization is independent of creation order.
        Rng rng(fnv1a64(name) ^ seed_);
        const double bound =
            std::sqrt(6.0 / static_cast<double>(rows + cols));
        for (int r = 0; r < rows; ++r)
          for (int c = 0; c < cols; ++c)
            p.value(r, c) =
                static_cast<Scalar>((rng.uniform() * 2.0 - 1.0) * bound);
        break;
      }
    }
    index_[name] = params_.size() - 1;
    return p;
  }

  bool has(const std::string& name) const { return index_.count(name) != 0; }

  Parameter<Scalar>& at(const std::string& name) {
    auto it = index_.find(name);
    if (it == index_.end()) fail_model("unknown parameter: " + name);
    return params_[it->second];
  }

  const Parameter<Scalar>& at(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) fail_model("unknown parameter: " + name);
    return params_[it->second];
  }

  std::size_t size() const { return params_.size(); }
  Parameter<Scalar>& operator[](std::size_t i) { return params_[i]; }
  const Parameter<Scalar>& operator[](std::size_t i) const { return params_[i]; }

  std::uint64_t seed() const { return seed_; }

  void clear_step() {
    for (auto& p : params_) p.clear_step();
  }

  void freeze_all() {
    for (auto& p : params_) p.trainable = false;
  }

  // FNV-1a over the raw value bytes of every parameter, in creation order.
  std::uint64_t checksum() const {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (const auto& p : params_) {
      h = fnv1a64(p.name.data(), p.name.size(), h);
      h = fnv1a64(p.value.data(),
                  sizeof(Scalar) * static_cast<std::size_t>(p.value.size()), h);
    }
    return h;
  }

 private:
  std::uint64_t seed_;
  std::deque<Parameter<Scalar>> params_;
  std::map<std::string, std::size_t> index_;
};

}  // namespace ttsfe::nn
