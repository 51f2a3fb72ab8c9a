// Copyright 2026 The SynonymNet Authors.
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

#ifndef SYNONYMNET_TAPE_H_
#define SYNONYMNET_TAPE_H_

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "synonymnet/matrix.h"

namespace synonymnet {

// Handle to a node on a Tape. Only meaningful together with the tape that
// produced it.
struct Var {
  int id = -1;
  bool valid() const { return id >= 0; }
};

// Reverse-mode gradient tape over matrices. Every operation appends a node
// holding its forward value; Backward() walks the nodes in reverse and
// accumulates gradients into every node that depends on a Parameter.
//
// Nodes that do not depend on any parameter carry no gradient and cost
// nothing in the backward pass. A tape is single-use and single-threaded;
// independent tapes may run concurrently.
class Tape {
 public:
  Tape() = default;
  Tape(const Tape &) = delete;
  Tape &operator=(const Tape &) = delete;

  Var Constant(Matrix value);
  // Borrowed constant; `value` must outlive the tape.
  Var ConstantRef(const Matrix &value);
  Var Parameter(Matrix value);
  // Borrowed parameter; `value` must outlive the tape.
  Var ParameterRef(const Matrix &value);

  const Matrix &value(Var v) const;
  double scalar(Var v) const;
  bool requires_grad(Var v) const { return nodes_[v.id].requires_grad; }

  // Back-propagates from the 1x1 node `loss`. Call at most once per tape.
  void Backward(Var loss);
  // Gradient of the Backward() target with respect to `v` (zeros if `v`
  // does not influence it).
  Matrix grad(Var v) const;

  size_t size() const { return nodes_.size(); }

  // Linear algebra.
  Var MatMul(Var a, Var b);
  Var MatMulTransB(Var a, Var b);  // a * b^T
  Var Transpose(Var a);
  Var Symmetrize(Var a);  // (a + a^T) / 2

  // Elementwise.
  Var Add(Var a, Var b);
  Var Sub(Var a, Var b);
  Var Mul(Var a, Var b);
  Var AddRowBroadcast(Var a, Var row);  // adds a 1 x cols row to every row
  Var Scale(Var a, double s);
  Var AddScalar(Var a, double s);
  Var Tanh(Var a);
  Var Sigmoid(Var a);
  Var Relu(Var a);
  Var Square(Var a);

  // Reductions.
  Var Sum(Var a);
  // 1 x cols: maximum of each column. Ties resolve to the first row and the
  // gradient flows only to that element.
  Var MaxCols(Var a);
  // rows x 1: maximum of each row, same tie rule.
  Var MaxRows(Var a);
  // 1x1 cosine similarity between two 1 x d rows; 0 (with zero gradient)
  // when either has zero norm.
  Var Cosine(Var a, Var b);

  // Softmax normalising each column over its rows. When `extra` is valid it
  // must be 1 x cols; extra(0, j) joins column j's normaliser as one more
  // logit but is not part of the output, so columns then sum to less than 1.
  Var SoftmaxCols(Var a, Var extra = {});
  // Row-wise counterpart; `extra` must be rows x 1.
  Var SoftmaxRows(Var a, Var extra = {});

  // Structure.
  Var Row(Var a, size_t r);
  Var GatherRows(Var table, std::span<const int32_t> ids);
  Var SliceCols(Var a, size_t begin, size_t count);
  Var ConcatCols(Var a, Var b);
  Var StackRows(std::span<const Var> rows);

  // One LSTM step. `gates_in` is the 1 x 4H input projection (x W_x + b) in
  // gate order [input, forget, output, candidate]; `state` is the 1 x 2H
  // previous [h | c]; `w_h` is H x 4H. Returns the new 1 x 2H [h | c].
  Var LstmCell(Var gates_in, Var state, Var w_h);

 private:
  using BackwardFn = std::function<void(Tape &, int self)>;

  struct Node {
    Matrix owned;
    const Matrix *borrowed = nullptr;
    Matrix grad;
    bool requires_grad = false;
    BackwardFn backward;
  };

  Var Push(Matrix value, bool requires_grad, BackwardFn backward);
  bool Tracks(Var v) const { return nodes_[v.id].requires_grad; }
  // Gradient buffer of node `id`, zero-initialised on first use.
  Matrix &GradOf(int id);
  const Matrix &SelfGrad(int self) const { return nodes_[self].grad; }

  std::vector<Node> nodes_;
  bool backward_done_ = false;
};

}  // namespace synonymnet

#endif  // SYNONYMNET_TAPE_H_
