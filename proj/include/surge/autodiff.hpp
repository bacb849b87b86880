// Copyright 2026 The surge-rec Authors
//
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

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <vector>

namespace surge::ad {

using Matrix = Eigen::MatrixXd;

// Reverse-mode tape over dense double matrices. Nodes are appended during the
// forward pass, so node order is already topological; backward() replays each
// node's pull closure in reverse creation order. Any node can receive a
// gradient, so model parameters are ordinary input nodes whose grad is read
// off after backward().
class Tape {
 public:
  explicit Tape(bool recording = true) : recording_(recording) {}

  int input(Matrix value) { return emit(std::move(value), {}); }

  int emit(Matrix value, std::function<void(Tape&)> pull) {
    nodes_.push_back(Node{std::move(value), Matrix(),
                          recording_ ? std::move(pull) : nullptr});
    return static_cast<int>(nodes_.size()) - 1;
  }

  const Matrix& value(int id) const { return nodes_[id].value; }

  bool has_grad(int id) const { return nodes_[id].grad.size() > 0; }

  // Gradient w.r.t. node `id`; zero matrix of matching shape if untouched.
  Matrix grad(int id) const {
    if (has_grad(id)) return nodes_[id].grad;
    return Matrix::Zero(nodes_[id].value.rows(), nodes_[id].value.cols());
  }

  const Matrix* grad_if_any(int id) const {
    return has_grad(id) ? &nodes_[id].grad : nullptr;
  }

  template <typename Expr>
  void accumulate(int id, const Expr& g) {
    Node& n = nodes_[id];
    if (n.grad.size() == 0) {
      n.grad = g;
    } else {
      n.grad += g;
    }
  }

  // Seeds d(root)/d(root) = 1 and propagates. `root` must be 1x1.
  void backward(int root);

  bool recording() const { return recording_; }
  std::size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    Matrix value;
    Matrix grad;
    std::function<void(Tape&)> pull;
  };
  std::vector<Node> nodes_;
  bool recording_;
};

// Lightweight handle to a tape node.
struct Var {
  Tape* tape = nullptr;
  int id = -1;

  bool valid() const { return tape != nullptr && id >= 0; }
  const Matrix& v() const { return tape->value(id); }
  Eigen::Index rows() const { return v().rows(); }
  Eigen::Index cols() const { return v().cols(); }
};

inline Var input(Tape& t, Matrix v) { return Var{&t, t.input(std::move(v))}; }

// --- elementwise / structural ops -----------------------------------------

Var add(Var a, Var b);
Var sub(Var a, Var b);
Var neg(Var a);
Var scale(Var a, double s);
// c - a for a constant matrix c (broadcast shape must match a).
Var rsub_const(const Matrix& c, Var a);
Var hadamard(Var a, Var b);
Var hadamard_const(Var a, const Matrix& c);

// --- linear algebra --------------------------------------------------------

Var matmul(Var a, Var b);
Var matmul_const_left(const Matrix& c, Var b);
Var matmul_const_right(Var a, const Matrix& c);
Var transpose(Var a);

// --- broadcasting / shaping ------------------------------------------------

// a (n x d) scaled per column by the row vector w (1 x d).
Var rowvec_bcast_mul(Var a, Var w);
// Adds a 1 x c bias row to every row of a (n x c).
Var add_row_bcast(Var a, Var bias);
// Repeats a 1 x c row n times.
Var tile_rows(Var a, int n);
Var concat_cols(const std::vector<Var>& parts);
Var get_row(Var a, int row);
// Rows of `table` selected by index; duplicate indices accumulate gradient.
Var gather_rows(Var table, std::vector<int> idx);

// --- nonlinearities ----------------------------------------------------------

Var leaky_relu(Var a, double slope);
Var sigmoid_v(Var a);
Var tanh_v(Var a);
// Pass-through gradient inside [lo, hi], zero outside.
Var clip(Var a, double lo, double hi);
Var log_v(Var a);

// --- reductions / specials ---------------------------------------------------

// Rows normalized to unit L2 norm; rows whose norm falls below `floor_norm`
// are divided by the floor instead and treated as constant-direction (their
// gradient is zeroed) so degenerate inputs never produce NaN or exploding
// gradients.
Var rowwise_l2_normalize(Var a, double floor_norm = 1e-12);

// Softmax across each row restricted to entries where keep != 0. Excluded
// entries are exactly zero in the output; all-excluded rows come back as
// all-zero rows. Max-subtraction is applied per row for stability.
Var masked_row_softmax(Var logits, const Matrix& keep);

// Per-row entropy -sum_j a_ij ln a_ij with 0 ln 0 := 0; returns n x 1.
Var row_entropy(Var a);

Var sum_all(Var a);  // 1x1
// Elementwise sqrt of max(x, 0); gradient 0 where the value is ~0.
Var sqrt_v(Var a);
// Scalar (1x1) broadcast multiply: s * a.
Var scalar_bcast_mul(Var s, Var a);

// --- composite helpers -------------------------------------------------------

inline Var linear(Var x, Var w, Var bias) {
  return add_row_bcast(matmul(x, w), bias);
}

inline Var frobenius_norm(Var a) { return sqrt_v(sum_all(hadamard(a, a))); }

}  // namespace surge::ad
