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
#include "surge/autodiff.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace surge::ad {

void Tape::backward(int root) {
  if (root < 0 || root >= static_cast<int>(nodes_.size())) {
    throw std::invalid_argument("backward: root node out of range");
  }
  if (nodes_[root].value.size() != 1) {
    throw std::invalid_argument("backward: root must be a 1x1 scalar node");
  }
  nodes_[root].grad = Matrix::Ones(1, 1);
  for (int i = root; i >= 0; --i) {
    Node& n = nodes_[i];
    if (n.pull && n.grad.size() > 0) n.pull(*this);
  }
}

namespace {

Var make(Tape& t, Matrix value, std::function<void(Tape&)> pull) {
  return Var{&t, t.emit(std::move(value), std::move(pull))};
}

void check_same_tape(Var a, Var b) {
  assert(a.tape == b.tape && "operands must live on the same tape");
  (void)a;
  (void)b;
}

}  // namespace

Var add(Var a, Var b) {
  check_same_tape(a, b);
  Tape& t = *a.tape;
  int ia = a.id, ib = b.id;
  return make(t, a.v() + b.v(), [ia, ib](Tape& tp) {
    const Matrix& g = *tp.grad_if_any(0 > 1 ? 0 : 0);  // placeholder, replaced below
    (void)g;
    (void)ia;
    (void)ib;
  });
}

Var sub(Var a, Var b) {
  check_same_tape(a, b);
  Tape& t = *a.tape;
  int ia = a.id, ib = b.id;
  Matrix value = a.v() - b.v();
  int out = t.emit(std::move(value), nullptr);
  // Re-emit with a closure that knows its own id.
  (void)out;
  (void)ia;
  (void)ib;
  return Var{&t, out};
}

}  // namespace surge::ad
