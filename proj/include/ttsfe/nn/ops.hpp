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
#include <limits>
#include <utility>
#include <vector>

#include "ttsfe/nn/tape.hpp"

namespace ttsfe::nn {

template <typename S>
inline void require_same_shape(const Mat<S>& a, const Mat<S>& b,
                               const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    fail_model(std::string(op) + ": operand shapes differ");
}

template <typename S>
Var<S> matmul(Tape<S>& t, Var<S> a, Var<S> b) {
  const Mat<S>& av = t.val(a);
  const Mat<S>& bv = t.val(b);
  if (av.cols() != bv.rows()) fail_model("matmul: inner dimensions differ");
  const bool ng = t.needs_grad(a) || t.needs_grad(b);
  return t.push(av * bv, ng, [a, b](Tape<S>& t, const Mat<S>& g) {
    t.accumulate(a, g * t.val(b).transpose());
    t.accumulate(b, t.val(a).transpose() * g);
  });
}

template <typename S>
Var<S> add(Tape<S>& t, Var<S> a, Var<S> b) {
  require_same_shape(t.val(a), t.val(b), "add");
  const bool ng = t.needs_grad(a) || t.needs_grad(b);
  return t.push(t.val(a) + t.val(b), ng, [a, b](Tape<S>& t, const Mat<S>& g) {
    t.accumulate(a, g);
    t.accumulate(b, g);
  });
}

// Adds a 1 x C row vector to every row of an n x C matrix.
template <typename S>
Var<S> add_rowvec(Tape<S>& t, Var<S> a, Var<S> row) {
  const Mat<S>& av = t.val(a);
  const Mat<S>& rv = t.val(row);
  if (rv.rows() != 1 || rv.cols() != av.cols())
    fail_model("add_rowvec: expected a 1 x cols row vector");
  Mat<S> out = av;
  out.rowwise() += rv.row(0);
  const bool ng = t.needs_grad(a) || t.needs_grad(row);
  return t.push(std::move(out), ng, [a, row](Tape<S>& t, const Mat<S>& g) {
    t.accumulate(a, g);
    t.accumulate(row, g.colwise().sum());
  });
}

template <typename S>
Var<S> scale(Tape<S>& t, Var<S> a, S factor) {
  return t.push(t.val(a) * factor, t.needs_grad(a),
                [a, factor](Tape<S>& t, const Mat<S>& g) {
                  t.accumulate(a, Mat<S>(g * factor));
                });
}

template <typename S>
Var<S> cmul(Tape<S>& t, Var<S> a, Var<S> b) {
  require_same_shape(t.val(a), t.val(b), "cmul");
  Mat<S> out = t.val(a).cwiseProduct(t.val(b));
  const bool ng = t.needs_grad(a) || t.needs_grad(b);
  return t.push(std::move(out), ng, [a, b](Tape<S>& t, const Mat<S>& g) {
    t.accumulate(a, g.cwiseProduct(t.val(b)));
    t.accumulate(b, g.cwiseProduct(t.val(a)));
  });
}

template <typename S>
Var<S> relu(Tape<S>& t, Var<S> a) {
  Mat<S> out = t.val(a).cwiseMax(S(0));
  return t.push(std::move(out), t.needs_grad(a),
                [a](Tape<S>& t, const Mat<S>& g) {
                  Mat<S> da = g;
                  const Mat<S>& x = t.val(a);
                  for (Eigen::Index i = 0; i < x.size(); ++i)
                    if (x(i) <= S(0)) da(i) = S(0);
                  t.accumulate(a, da);
                });
}

template <typename S>
Var<S> tanh_act(Tape<S>& t, Var<S> a) {
  Mat<S> out = t.val(a).array().tanh().matrix();
  Var<S> self{t.upcoming()};
  return t.push(std::move(out), t.needs_grad(a),
                [a, self](Tape<S>& t, const Mat<S>& g) {
                  const Mat<S>& y = t.val(self);
                  Mat<S> da =
                      g.cwiseProduct((Mat<S>::Ones(y.rows(), y.cols()) -
                                      y.cwiseProduct(y)));
                  t.accumulate(a, da);
                });
}

template <typename S>
Var<S> sigmoid(Tape<S>& t, Var<S> a) {
  Mat<S> out =
      (S(1) / (S(1) + (-t.val(a).array()).exp())).matrix();
  Var<S> self{t.upcoming()};
  return t.push(std::move(out), t.needs_grad(a),
                [a, self](Tape<S>& t, const Mat<S>& g) {
                  const Mat<S>& y = t.val(self);
                  Mat<S> da = g.cwiseProduct(
                      y.cwiseProduct(Mat<S>(Mat<S>::Ones(y.rows(), y.cols()) - y)));
                  t.accumulate(a, da);
                });
}

template <typename S>
Var<S> transpose(Tape<S>& t, Var<S> a) {
  Mat<S> out = t.val(a).transpose();
  return t.push(std::move(out), t.needs_grad(a),
                [a](Tape<S>& t, const Mat<S>& g) {
                  t.accumulate(a, g.transpose());
                });
}

template <typename S>
Var<S> concat_cols(Tape<S>& t, Var<S> a, Var<S> b) {
  const Mat<S>& av = t.val(a);
  const Mat<S>& bv = t.val(b);
  if (av.rows() != bv.rows()) fail_model("concat_cols: row counts differ");
  Mat<S> out(av.rows(), av.cols() + bv.cols());
  out.leftCols(av.cols()) = av;
  out.rightCols(bv.cols()) = bv;
  const bool ng = t.needs_grad(a) || t.needs_grad(b);
  return t.push(std::move(out), ng, [a, b](Tape<S>& t, const Mat<S>& g) {
    const Eigen::Index ac = t.val(a).cols();
    t.accumulate(a, g.leftCols(ac));
    t.accumulate(b, g.rightCols(g.cols() - ac));
  });
}

template <typename S>
Var<S> slice_cols(Tape<S>& t, Var<S> a, int begin, int count) {
  const Mat<S>& av = t.val(a);
  if (begin < 0 || count <= 0 || begin + count > av.cols())
    fail_model("slice_cols: range out of bounds");
  Mat<S> out = av.middleCols(begin, count);
  return t.push(std::move(out), t.needs_grad(a),
                [a, begin, count](Tape<S>& t, const Mat<S>& g) {
                  const Mat<S>& av = t.val(a);
                  Mat<S> da = Mat<S>::Zero(av.rows(), av.cols());
                  da.middleCols(begin, count) = g;
                  t.accumulate(a, da);
                });
}

// Picks rows of `a` by index; duplicates are allowed and their gradients add.
template <typename S>
Var<S> gather_rows(Tape<S>& t, Var<S> a, std::vector<int> rows) {
  const Mat<S>& av = t.val(a);
  for (int r : rows)
    if (r < 0 || r >= av.rows()) fail_model("gather_rows: index out of range");
  Mat<S> out(static_cast<Eigen::Index>(rows.size()), av.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(i) = av.row(rows[i]);
  return t.push(std::move(out), t.needs_grad(a),
                [a, rows = std::move(rows)](Tape<S>& t, const Mat<S>& g) {
                  const Mat<S>& av = t.val(a);
                  Mat<S> da = Mat<S>::Zero(av.rows(), av.cols());
                  for (std::size_t i = 0; i < rows.size(); ++i)
                    da.row(rows[i]) += g.row(i);
                  t.accumulate(a, da);
                });
}

// Stacks 1 x C row nodes into an n x C matrix.
template <typename S>
Var<S> stack_rows(Tape<S>& t, const std::vector<Var<S>>& rows) {
  if (rows.empty()) fail_model("stack_rows: no rows");
  const Eigen::Index cols = t.val(rows[0]).cols();
  Mat<S> out(static_cast<Eigen::Index>(rows.size()), cols);
  bool ng = false;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Mat<S>& rv = t.val(rows[i]);
    if (rv.rows() != 1 || rv.cols() != cols)
      fail_model("stack_rows: rows must all be 1 x cols");
    out.row(static_cast<Eigen::Index>(i)) = rv.row(0);
    ng = ng || t.needs_grad(rows[i]);
  }
  return t.push(std::move(out), ng,
                [rows](Tape<S>& t, const Mat<S>& g) {
                  for (std::size_t i = 0; i < rows.size(); ++i)
                    t.accumulate(rows[i],
                                 Mat<S>(g.row(static_cast<Eigen::Index>(i))));
                });
}

// Vertical concatenation of arbitrary-height pieces.
template <typename S>
Var<S> concat_rows_list(Tape<S>& t, const std::vector<Var<S>>& pieces) {
  if (pieces.empty()) fail_model("concat_rows_list: no pieces");
  const Eigen::Index cols = t.val(pieces[0]).cols();
  Eigen::Index rows = 0;
  bool ng = false;
  for (Var<S> p : pieces) {
    if (t.val(p).cols() != cols)
      fail_model("concat_rows_list: column counts differ");
    rows += t.val(p).rows();
    ng = ng || t.needs_grad(p);
  }
  Mat<S> out(rows, cols);
  Eigen::Index at = 0;
  for (Var<S> p : pieces) {
    out.middleRows(at, t.val(p).rows()) = t.val(p);
    at += t.val(p).rows();
  }
  return t.push(std::move(out), ng,
                [pieces](Tape<S>& t, const Mat<S>& g) {
                  Eigen::Index at = 0;
                  for (Var<S> p : pieces) {
                    const Eigen::Index r = t.val(p).rows();
                    t.accumulate(p, g.middleRows(at, r));
                    at += r;
                  }
                });
}

// Sliding-window unfold with zero padding: row i of the output is the
// horizontal concatenation of rows [i - k/2, i + k/2] of the input, so a
// width-k convolution becomes unfold followed by a single matmul.
template <typename S>
Var<S> unfold_rows(Tape<S>& t, Var<S> a, int kernel) {
  const Mat<S>& av = t.val(a);
  if (kernel < 1 || kernel % 2 == 0)
    fail_model("unfold_rows: kernel must be odd and positive");
  const int n = static_cast<int>(av.rows());
  const int c = static_cast<int>(av.cols());
  const int half = kernel / 2;
  Mat<S> out = Mat<S>::Zero(n, static_cast<Eigen::Index>(kernel) * c);
  for (int i = 0; i < n; ++i)
    for (int o = -half; o <= half; ++o) {
      const int src = i + o;
      if (src < 0 || src >= n) continue;
      out.block(i, (o + half) * c, 1, c) = av.row(src);
    }
  return t.push(std::move(out), t.needs_grad(a),
                [a, kernel, half](Tape<S>& t, const Mat<S>& g) {
                  const Mat<S>& av = t.val(a);
                  const int n = static_cast<int>(av.rows());
                  const int c = static_cast<int>(av.cols());
                  Mat<S> da = Mat<S>::Zero(n, c);
                  for (int i = 0; i < n; ++i)
                    for (int o = -half; o <= half; ++o) {
                      const int src = i + o;
                      if (src < 0 || src >= n) continue;
                      da.row(src) += g.block(i, (o + half) * c, 1, c);
                    }
                  t.accumulate(a, da);
                });
}

// Means of row groups: output row k averages the input rows in groups[k].
// Groups may overlap or leave rows unused; unused rows get zero gradient.
template <typename S>
Var<S> segment_mean(Tape<S>& t, Var<S> a,
                    std::vector<std::vector<int>> groups) {
  const Mat<S>& av = t.val(a);
  if (groups.empty()) fail_model("segment_mean: no groups");
  Mat<S> out(static_cast<Eigen::Index>(groups.size()), av.cols());
  for (std::size_t k = 0; k < groups.size(); ++k) {
    if (groups[k].empty()) fail_model("segment_mean: empty group");
    Mat<S> acc = Mat<S>::Zero(1, av.cols());
    for (int r : groups[k]) {
      if (r < 0 || r >= av.rows())
        fail_model("segment_mean: row index out of range");
      acc += av.row(r);
    }
    out.row(static_cast<Eigen::Index>(k)) =
        acc / static_cast<S>(groups[k].size());
  }
  return t.push(std::move(out), t.needs_grad(a),
                [a, groups = std::move(groups)](Tape<S>& t, const Mat<S>& g) {
                  const Mat<S>& av = t.val(a);
                  Mat<S> da = Mat<S>::Zero(av.rows(), av.cols());
                  for (std::size_t k = 0; k < groups.size(); ++k) {
                    const S inv = S(1) / static_cast<S>(groups[k].size());
                    for (int r : groups[k])
                      da.row(r) +=
                          g.row(static_cast<Eigen::Index>(k)) * inv;
                  }
                  t.accumulate(a, da);
                });
}

template <typename S>
Var<S> softmax_rows(Tape<S>& t, Var<S> a) {
  const Mat<S>& av = t.val(a);
  Mat<S> out(av.rows(), av.cols());
  for (Eigen::Index r = 0; r < av.rows(); ++r) {
    const S mx = av.row(r).maxCoeff();
    Eigen::Array<S, 1, Eigen::Dynamic> e = (av.row(r).array() - mx).exp();
    out.row(r) = (e / e.sum()).matrix();
  }
  Var<S> self{t.upcoming()};
  return t.push(std::move(out), t.needs_grad(a),
                [a, self](Tape<S>& t, const Mat<S>& g) {
                  const Mat<S>& y = t.val(self);
                  Mat<S> da(y.rows(), y.cols());
                  for (Eigen::Index r = 0; r < y.rows(); ++r) {
                    const S dot = g.row(r).dot(y.row(r));
                    da.row(r) =
                        y.row(r).cwiseProduct(g.row(r) -
                                              Mat<S>::Constant(1, y.cols(), dot));
                  }
                  t.accumulate(a, da);
                });
}

// Inverted dropout; identity when the tape is in inference mode.
template <typename S>
Var<S> dropout(Tape<S>& t, Var<S> a, double rate) {
  if (!t.training || rate <= 0.0) return a;
  if (rate >= 1.0) fail_model("dropout: rate must be below 1");
  if (t.rng == nullptr) fail_model("dropout: training tape has no rng");
  const Mat<S>& av = t.val(a);
  Mat<S> mask(av.rows(), av.cols());
  const S keep_inv = S(1.0 / (1.0 - rate));
  for (Eigen::Index i = 0; i < mask.size(); ++i)
    mask(i) = t.rng->uniform() < rate ? S(0) : keep_inv;
  Var<S> m = t.constant(std::move(mask));
  return cmul(t, a, m);
}

// Row-wise layer normalization with learned 1 x C gain and bias.
template <typename S>
Var<S> layer_norm(Tape<S>& t, Var<S> x, Var<S> gamma, Var<S> beta,
                  S eps = S(1e-5)) {
  const Mat<S>& xv = t.val(x);
  const Mat<S>& gv = t.val(gamma);
  const Mat<S>& bv = t.val(beta);
  if (gv.rows() != 1 || bv.rows() != 1 || gv.cols() != xv.cols() ||
      bv.cols() != xv.cols())
    fail_model("layer_norm: gain and bias must be 1 x cols");
  const Eigen::Index n = xv.rows(), c = xv.cols();
  Mat<S> xhat(n, c);
  Mat<S> inv_std(n, 1);
  for (Eigen::Index r = 0; r < n; ++r) {
    const S mu = xv.row(r).mean();
    const S var = (xv.row(r).array() - mu).square().mean();
    const S is = S(1) / std::sqrt(var + eps);
    inv_std(r, 0) = is;
    xhat.row(r) = ((xv.row(r).array() - mu) * is).matrix();
  }
  Mat<S> out = xhat;
  for (Eigen::Index r = 0; r < n; ++r)
    out.row(r) = xhat.row(r).cwiseProduct(gv.row(0)) + bv.row(0);
  const bool ng = t.needs_grad(x) || t.needs_grad(gamma) || t.needs_grad(beta);
  return t.push(
      std::move(out), ng,
      [x, gamma, beta, xhat = std::move(xhat),
       inv_std = std::move(inv_std)](Tape<S>& t, const Mat<S>& g) {
        const Mat<S>& gv = t.val(gamma);
        const Eigen::Index n = xhat.rows(), c = xhat.cols();
        t.accumulate(beta, g.colwise().sum());
        t.accumulate(gamma, g.cwiseProduct(xhat).colwise().sum());
        Mat<S> dx(n, c);
        for (Eigen::Index r = 0; r < n; ++r) {
          Eigen::Array<S, 1, Eigen::Dynamic> dxhat =
              g.row(r).cwiseProduct(gv.row(0)).array();
          const S m1 = dxhat.mean();
          const S m2 = (dxhat * xhat.row(r).array()).mean();
          dx.row(r) = ((dxhat - m1 - xhat.row(r).array() * m2) * inv_std(r, 0))
                          .matrix();
        }
        t.accumulate(x, dx);
      });
}

// Column-wise batch normalization over the rows of the current call, with
// learned 1 x C gain and bias. Training mode; statistics are returned to the
// caller so the module can maintain running estimates for inference.
template <typename S>
Var<S> batch_norm_train(Tape<S>& t, Var<S> x, Var<S> gamma, Var<S> beta,
                        Mat<S>* batch_mean, Mat<S>* batch_var,
                        S eps = S(1e-5)) {
  const Mat<S>& xv = t.val(x);
  const Mat<S>& gv = t.val(gamma);
  const Mat<S>& bv = t.val(beta);
  if (gv.rows() != 1 || bv.rows() != 1 || gv.cols() != xv.cols() ||
      bv.cols() != xv.cols())
    fail_model("batch_norm: gain and bias must be 1 x cols");
  if (xv.rows() < 1) fail_model("batch_norm: empty input");
  const Eigen::Index n = xv.rows(), c = xv.cols();
  Mat<S> mu = xv.colwise().mean();
  Mat<S> var(1, c);
  for (Eigen::Index j = 0; j < c; ++j)
    var(0, j) = (xv.col(j).array() - mu(0, j)).square().mean();
  if (batch_mean) *batch_mean = mu;
  if (batch_var) *batch_var = var;
  Mat<S> inv_std(1, c);
  for (Eigen::Index j = 0; j < c; ++j)
    inv_std(0, j) = S(1) / std::sqrt(var(0, j) + eps);
  Mat<S> xhat(n, c);
  for (Eigen::Index r = 0; r < n; ++r)
    xhat.row(r) = (xv.row(r) - mu.row(0)).cwiseProduct(inv_std.row(0));
  Mat<S> out(n, c);
  for (Eigen::Index r = 0; r < n; ++r)
    out.row(r) = xhat.row(r).cwiseProduct(gv.row(0)) + bv.row(0);
  const bool ng = t.needs_grad(x) || t.needs_grad(gamma) || t.needs_grad(beta);
  return t.push(
      std::move(out), ng,
      [x, gamma, beta, xhat = std::move(xhat),
       inv_std = std::move(inv_std)](Tape<S>& t, const Mat<S>& g) {
        const Mat<S>& gv = t.val(gamma);
        const Eigen::Index n = xhat.rows(), c = xhat.cols();
        t.accumulate(beta, g.colwise().sum());
        t.accumulate(gamma, g.cwiseProduct(xhat).colwise().sum());
        Mat<S> dx(n, c);
        for (Eigen::Index j = 0; j < c; ++j) {
          Eigen::Array<S, Eigen::Dynamic, 1> dxhat =
              g.col(j).array() * gv(0, j);
          const S m1 = dxhat.mean();
          const S m2 = (dxhat * xhat.col(j).array()).mean();
          dx.col(j) =
              ((dxhat - m1 - xhat.col(j).array() * m2) * inv_std(0, j))
                  .matrix();
        }
        t.accumulate(x, dx);
      });
}

// Inference-mode batch normalization using fixed running statistics.
template <typename S>
Var<S> batch_norm_eval(Tape<S>& t, Var<S> x, Var<S> gamma, Var<S> beta,
                       const Mat<S>& running_mean, const Mat<S>& running_var,
                       S eps = S(1e-5)) {
  const Mat<S>& xv = t.val(x);
  if (running_mean.rows() != 1 || running_var.rows() != 1 ||
      running_mean.cols() != xv.cols() || running_var.cols() != xv.cols())
    fail_model("batch_norm: running statistics must be 1 x cols");
  Mat<S> inv_std(1, xv.cols());
  for (Eigen::Index j = 0; j < xv.cols(); ++j)
    inv_std(0, j) = S(1) / std::sqrt(running_var(0, j) + eps);
  Mat<S> xhat(xv.rows(), xv.cols());
  for (Eigen::Index r = 0; r < xv.rows(); ++r)
    xhat.row(r) = (xv.row(r) - running_mean.row(0)).cwiseProduct(inv_std.row(0));
  Var<S> xh = t.push(
      Mat<S>(xhat), t.needs_grad(x),
      [x, inv_std](Tape<S>& t, const Mat<S>& g) {
        Mat<S> dx(g.rows(), g.cols());
        for (Eigen::Index r = 0; r < g.rows(); ++r)
          dx.row(r) = g.row(r).cwiseProduct(inv_std.row(0));
        t.accumulate(x, dx);
      });
  Var<S> scaled = t.push(
      Mat<S>(t.val(xh).array().rowwise() * t.val(gamma).row(0).array()),
      t.needs_grad(xh) || t.needs_grad(gamma),
      [xh, gamma](Tape<S>& t, const Mat<S>& g) {
        const Mat<S>& gv = t.val(gamma);
        Mat<S> dxh(g.rows(), g.cols());
        for (Eigen::Index r = 0; r < g.rows(); ++r)
          dxh.row(r) = g.row(r).cwiseProduct(gv.row(0));
        t.accumulate(xh, dxh);
        t.accumulate(gamma, g.cwiseProduct(t.val(xh)).colwise().sum());
      });
  return add_rowvec(t, scaled, beta);
}

template <typename S>
Var<S> sum_all(Tape<S>& t, Var<S> a) {
  Mat<S> out(1, 1);
  out(0, 0) = t.val(a).sum();
  return t.push(std::move(out), t.needs_grad(a),
                [a](Tape<S>& t, const Mat<S>& g) {
                  const Mat<S>& av = t.val(a);
                  t.accumulate(a,
                               Mat<S>(Mat<S>::Constant(av.rows(), av.cols(),
                                                       g(0, 0))));
                });
}

// Mean cross-entropy over rows of an n x K logit matrix against integer
// labels. The pullback is the closed form (softmax - onehot) / n.
template <typename S>
Var<S> ce_loss_rows(Tape<S>& t, Var<S> logits, std::vector<int> golds) {
  const Mat<S>& lv = t.val(logits);
  if (static_cast<Eigen::Index>(golds.size()) != lv.rows())
    fail_model("ce_loss_rows: one label per row required");
  if (golds.empty()) fail_model("ce_loss_rows: empty batch");
  Mat<S> probs(lv.rows(), lv.cols());
  S total = S(0);
  for (Eigen::Index r = 0; r < lv.rows(); ++r) {
    const int gold = golds[static_cast<std::size_t>(r)];
    if (gold < 0 || gold >= lv.cols())
      fail_model("ce_loss_rows: label out of range");
    const S mx = lv.row(r).maxCoeff();
    Eigen::Array<S, 1, Eigen::Dynamic> e = (lv.row(r).array() - mx).exp();
    const S z = e.sum();
    probs.row(r) = (e / z).matrix();
    total -= (lv(r, gold) - mx - std::log(z));
  }
  Mat<S> out(1, 1);
  out(0, 0) = total / static_cast<S>(lv.rows());
  return t.push(std::move(out), t.needs_grad(logits),
                [logits, golds = std::move(golds),
                 probs = std::move(probs)](Tape<S>& t, const Mat<S>& g) {
                  Mat<S> dl = probs;
                  for (Eigen::Index r = 0; r < dl.rows(); ++r)
                    dl(r, golds[static_cast<std::size_t>(r)]) -= S(1);
                  dl *= g(0, 0) / static_cast<S>(dl.rows());
                  t.accumulate(logits, dl);
                });
}

// Cross-entropy restricted to admissible classes. `mask` disables entries of
// the softmax; `labeled` lists (row, gold) pairs that contribute to the mean.
// Rows absent from `labeled` contribute nothing and receive zero gradient.
template <typename S>
Var<S> masked_ce_loss(Tape<S>& t, Var<S> logits,
                      const std::vector<std::vector<bool>>& mask,
                      std::vector<std::pair<int, int>> labeled) {
  const Mat<S>& lv = t.val(logits);
  if (static_cast<Eigen::Index>(mask.size()) != lv.rows())
    fail_model("masked_ce_loss: mask row count mismatch");
  for (const auto& row : mask)
    if (static_cast<Eigen::Index>(row.size()) != lv.cols())
      fail_model("masked_ce_loss: mask column count mismatch");
  if (labeled.empty()) fail_model("masked_ce_loss: no labeled positions");
  Mat<S> dl = Mat<S>::Zero(lv.rows(), lv.cols());
  S total = S(0);
  for (const auto& [r, gold] : labeled) {
    if (r < 0 || r >= lv.rows()) fail_model("masked_ce_loss: row out of range");
    if (gold < 0 || gold >= lv.cols())
      fail_model("masked_ce_loss: label out of range");
    const auto& mrow = mask[static_cast<std::size_t>(r)];
    if (!mrow[static_cast<std::size_t>(gold)])
      fail_model("masked_ce_loss: gold class is masked out");
    S mx = std::numeric_limits<S>::lowest();
    for (Eigen::Index k = 0; k < lv.cols(); ++k)
      if (mrow[static_cast<std::size_t>(k)]) mx = std::max(mx, lv(r, k));
    S z = S(0);
    for (Eigen::Index k = 0; k < lv.cols(); ++k)
      if (mrow[static_cast<std::size_t>(k)]) z += std::exp(lv(r, k) - mx);
    for (Eigen::Index k = 0; k < lv.cols(); ++k)
      if (mrow[static_cast<std::size_t>(k)])
        dl(r, k) += std::exp(lv(r, k) - mx) / z;
    dl(r, gold) -= S(1);
    total -= (lv(r, gold) - mx - std::log(z));
  }
  const S inv = S(1) / static_cast<S>(labeled.size());
  dl *= inv;
  Mat<S> out(1, 1);
  out(0, 0) = total * inv;
  return t.push(std::move(out), t.needs_grad(logits),
                [logits, dl = std::move(dl)](Tape<S>& t, const Mat<S>& g) {
                  t.accumulate(logits, Mat<S>(dl * g(0, 0)));
                });
}

// Fixed sinusoidal position code table, n x dim.
template <typename S>
Mat<S> sinusoidal_positions(int n, int dim) {
  if (dim % 2 != 0) fail_model("sinusoidal_positions: dim must be even");
  Mat<S> pe = Mat<S>::Zero(n, dim);
  for (int pos = 0; pos < n; ++pos)
    for (int i = 0; i < dim / 2; ++i) {
      const double freq =
          std::pow(10000.0, -2.0 * static_cast<double>(i) /
                                 static_cast<double>(dim));
      pe(pos, 2 * i) = static_cast<S>(std::sin(pos * freq));
      pe(pos, 2 * i + 1) = static_cast<S>(std::cos(pos * freq));
    }
  return pe;
}

template <typename S>
Var<S> add_positions(Tape<S>& t, Var<S> x) {
  const Mat<S>& xv = t.val(x);
  Var<S> pe = t.constant(
      sinusoidal_positions<S>(static_cast<int>(xv.rows()),
                              static_cast<int>(xv.cols())));
  return add(t, x, pe);
}

}  // namespace ttsfe::nn
