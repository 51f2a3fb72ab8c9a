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

#include "synonymnet/tape.h"

#include <cmath>
#include <limits>
#include <string>

#include "synonymnet/error.h"
#include "synonymnet/kernels.h"

namespace synonymnet {
namespace {

void RequireSameShape(const Matrix &a, const Matrix &b, const char *op) {
  if (!a.SameShape(b)) {
    throw ShapeError(std::string(op) + ": shape mismatch " + a.ShapeString() +
                     " vs " + b.ShapeString());
  }
}

double SigmoidScalar(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// out += a * b^T  (out is a.rows x b.rows).
void AddMatMulTransB(const Matrix &a, const Matrix &b, Matrix &out) {
  for (size_t i = 0; i < a.rows(); ++i) {
    auto ai = a.row(i);
    for (size_t j = 0; j < b.rows(); ++j) out(i, j) += Dot(ai, b.row(j));
  }
}

// out += a^T * b  (out is a.cols x b.cols).
void AddMatMulTransA(const Matrix &a, const Matrix &b, Matrix &out) {
  for (size_t k = 0; k < a.rows(); ++k) {
    auto brow = b.row(k);
    for (size_t i = 0; i < a.cols(); ++i) {
      const double aki = a(k, i);
      if (aki == 0.0) continue;
      auto o = out.row(i);
      for (size_t j = 0; j < b.cols(); ++j) o[j] += aki * brow[j];
    }
  }
}

void AddInto(Matrix &dst, const Matrix &src) {
  auto d = dst.data();
  auto s = src.data();
  for (size_t i = 0; i < d.size(); ++i) d[i] += s[i];
}

}  // namespace

Var Tape::Push(Matrix value, bool requires_grad, BackwardFn backward) {
  Node node;
  node.owned = std::move(value);
  node.requires_grad = requires_grad;
  if (requires_grad) node.backward = std::move(backward);
  nodes_.push_back(std::move(node));
  return Var{static_cast<int>(nodes_.size()) - 1};
}

Var Tape::Constant(Matrix value) { return Push(std::move(value), false, {}); }

Var Tape::ConstantRef(const Matrix &value) {
  Var v = Push(Matrix(), false, {});
  nodes_[v.id].borrowed = &value;
  return v;
}

Var Tape::Parameter(Matrix value) { return Push(std::move(value), true, {}); }

Var Tape::ParameterRef(const Matrix &value) {
  Var v = Push(Matrix(), true, {});
  nodes_[v.id].borrowed = &value;
  return v;
}

const Matrix &Tape::value(Var v) const {
  const Node &n = nodes_[v.id];
  return n.borrowed != nullptr ? *n.borrowed : n.owned;
}

double Tape::scalar(Var v) const {
  const Matrix &m = value(v);
  if (m.size() != 1) {
    throw ShapeError("scalar requested from " + m.ShapeString() + " node");
  }
  return m[0];
}

Matrix &Tape::GradOf(int id) {
  Node &n = nodes_[id];
  if (n.grad.empty()) {
    const Matrix &v = value(Var{id});
    n.grad = Matrix(v.rows(), v.cols());
  }
  return n.grad;
}

void Tape::Backward(Var loss) {
  if (backward_done_) throw Error("Tape::Backward called twice");
  backward_done_ = true;
  if (value(loss).size() != 1) {
    throw ShapeError("Backward target must be 1x1, got " +
                     value(loss).ShapeString());
  }
  if (!Tracks(loss)) return;
  GradOf(loss.id)[0] = 1.0;
  for (int id = loss.id; id >= 0; --id) {
    Node &n = nodes_[id];
    if (!n.requires_grad || !n.backward || n.grad.empty()) continue;
    n.backward(*this, id);
  }
}

Matrix Tape::grad(Var v) const {
  const Node &n = nodes_[v.id];
  if (!n.grad.empty()) return n.grad;
  const Matrix &val = value(v);
  return Matrix(val.rows(), val.cols());
}

Var Tape::MatMul(Var a, Var b) {
  Matrix out = synonymnet::MatMul(value(a), value(b));
  return Push(std::move(out), Tracks(a) || Tracks(b), [a, b](Tape &t, int self) {
    const Matrix &g = t.SelfGrad(self);
    if (t.Tracks(a)) AddMatMulTransB(g, t.value(b), t.GradOf(a.id));
    if (t.Tracks(b)) AddMatMulTransA(t.value(a), g, t.GradOf(b.id));
  });
}

Var Tape::MatMulTransB(Var a, Var b) {
  Matrix out = synonymnet::MatMulTransB(value(a), value(b));
  return Push(std::move(out), Tracks(a) || Tracks(b), [a, b](Tape &t, int self) {
    const Matrix &g = t.SelfGrad(self);
    // C = A B^T: dA = G B, dB = G^T A.
    if (t.Tracks(a)) {
      Matrix &ga = t.GradOf(a.id);
      AddInto(ga, synonymnet::MatMul(g, t.value(b)));
    }
    if (t.Tracks(b)) AddMatMulTransA(g, t.value(a), t.GradOf(b.id));
  });
}

Var Tape::Transpose(Var a) {
  Matrix out = synonymnet::Transpose(value(a));
  return Push(std::move(out), Tracks(a), [a](Tape &t, int self) {
    AddInto(t.GradOf(a.id), synonymnet::Transpose(t.SelfGrad(self)));
  });
}

Var Tape::Symmetrize(Var a) {
  const Matrix &x = value(a);
  if (x.rows() != x.cols()) {
    throw ShapeError("symmetrize: matrix is not square " + x.ShapeString());
  }
  Matrix out(x.rows(), x.cols());
  for (size_t i = 0; i < x.rows(); ++i) {
    for (size_t j = 0; j < x.cols(); ++j) out(i, j) = 0.5 * (x(i, j) + x(j, i));
  }
  return Push(std::move(out), Tracks(a), [a](Tape &t, int self) {
    const Matrix &g = t.SelfGrad(self);
    Matrix &ga = t.GradOf(a.id);
    for (size_t i = 0; i < g.rows(); ++i) {
      for (size_t j = 0; j < g.cols(); ++j) ga(i, j) += 0.5 * (g(i, j) + g(j, i));
    }
  });
}

Var Tape::Add(Var a, Var b) {
  RequireSameShape(value(a), value(b), "add");
  Matrix out = value(a);
  AddInto(out, value(b));
  return Push(std::move(out), Tracks(a) || Tracks(b), [a, b](Tape &t, int self) {
    const Matrix &g = t.SelfGrad(self);
    if (t.Tracks(a)) AddInto(t.GradOf(a.id), g);
    if (t.Tracks(b)) AddInto(t.GradOf(b.id), g);
  });
}

Var Tape::Sub(Var a, Var b) {
  RequireSameShape(value(a), value(b), "sub");
  Matrix out = value(a);
  auto o = out.data();
  auto vb = value(b).data();
  for (size_t i = 0; i < o.size(); ++i) o[i] -= vb[i];
  return Push(std::move(out), Tracks(a) || Tracks(b), [a, b](Tape &t, int self) {
    const Matrix &g = t.SelfGrad(self);
    if (t.Tracks(a)) AddInto(t.GradOf(a.id), g);
    if (t.Tracks(b)) {
      auto gb = t.GradOf(b.id).data();
      for (size_t i = 0; i < gb.size(); ++i) gb[i] -= g[i];
    }
  });
}

Var Tape::Mul(Var a, Var b) {
  RequireSameShape(value(a), value(b), "mul");
  Matrix out = value(a);
  auto o = out.data();
  auto vb = value(b).data();
  for (size_t i = 0; i < o.size(); ++i) o[i] *= vb[i];
  return Push(std::move(out), Tracks(a) || Tracks(b), [a, b](Tape &t, int self) {
    const Matrix &g = t.SelfGrad(self);
    if (t.Tracks(a)) {
      auto ga = t.GradOf(a.id).data();
      auto vb = t.value(b).data();
      for (size_t i = 0; i < ga.size(); ++i) ga[i] += g[i] * vb[i];
    }
    if (t.Tracks(b)) {
      auto gb = t.GradOf(b.id).data();
      auto va = t.value(a).data();
      for (size_t i = 0; i < gb.size(); ++i) gb[i] += g[i] * va[i];
    }
  });
}

Var Tape::AddRowBroadcast(Var a, Var row) {
  const Matrix &x = value(a);
  const Matrix &r = value(row);
  if (r.rows() != 1 || r.cols() != x.cols()) {
    throw ShapeError("add_row_broadcast: shape mismatch " + x.ShapeString() +
                     " vs " + r.ShapeString());
  }
  Matrix out = x;
  for (size_t i = 0; i < out.rows(); ++i) {
    auto o = out.row(i);
    for (size_t j = 0; j < o.size(); ++j) o[j] += r[j];
  }
  return Push(std::move(out), Tracks(a) || Tracks(row),
              [a, row](Tape &t, int self) {
                const Matrix &g = t.SelfGrad(self);
                if (t.Tracks(a)) AddInto(t.GradOf(a.id), g);
                if (t.Tracks(row)) {
                  Matrix &gr = t.GradOf(row.id);
                  for (size_t i = 0; i < g.rows(); ++i) {
                    auto gi = g.row(i);
                    for (size_t j = 0; j < gi.size(); ++j) gr[j] += gi[j];
                  }
                }
              });
}

Var Tape::Scale(Var a, double s) {
  Matrix out = value(a);
  for (double &v : out.data()) v *= s;
  return Push(std::move(out), Tracks(a), [a, s](Tape &t, int self) {
    const Matrix &g = t.SelfGrad(self);
    auto ga = t.GradOf(a.id).data();
    for (size_t i = 0; i < ga.size(); ++i) ga[i] += s * g[i];
  });
}

Var Tape::AddScalar(Var a, double s) {
  Matrix out = value(a);
  for (double &v : out.data()) v += s;
  return Push(std::move(out), Tracks(a), [a](Tape &t, int self) {
    AddInto(t.GradOf(a.id), t.SelfGrad(self));
  });
}

Var Tape::Tanh(Var a) {
  Matrix out = value(a);
  for (double &v : out.data()) v = std::tanh(v);
  return Push(std::move(out), Tracks(a), [a](Tape &t, int self) {
    const Matrix &g = t.SelfGrad(self);
    auto y = t.value(Var{self}).data();
    auto ga = t.GradOf(a.id).data();
    for (size_t i = 0; i < ga.size(); ++i) ga[i] += g[i] * (1.0 - y[i] * y[i]);
  });
}

Var Tape::Sigmoid(Var a) {
  Matrix out = value(a);
  for (double &v : out.data()) v = SigmoidScalar(v);
  return Push(std::move(out), Tracks(a), [a](Tape &t, int self) {
    const Matrix &g = t.SelfGrad(self);
    auto y = t.value(Var{self}).data();
    auto ga = t.GradOf(a.id).data();
    for (size_t i = 0; i < ga.size(); ++i) ga[i] += g[i] * y[i] * (1.0 - y[i]);
  });
}

Var Tape::Relu(Var a) {
  Matrix out = value(a);
  for (double &v : out.data()) v = v > 0.0 ? v : 0.0;
  return Push(std::move(out), Tracks(a), [a](Tape &t, int self) {
    const Matrix &g = t.SelfGrad(self);
    auto x = t.value(a).data();
    auto ga = t.GradOf(a.id).data();
    for (size_t i = 0; i < ga.size(); ++i) {
      if (x[i] > 0.0) ga[i] += g[i];
    }
  });
}

Var Tape::Square(Var a) {
  Matrix out = value(a);
  for (double &v : out.data()) v *= v;
  return Push(std::move(out), Tracks(a), [a](Tape &t, int self) {
    const Matrix &g = t.SelfGrad(self);
    auto x = t.value(a).data();
    auto ga = t.GradOf(a.id).data();
    for (size_t i = 0; i < ga.size(); ++i) ga[i] += 2.0 * x[i] * g[i];
  });
}

Var Tape::Sum(Var a) {
  double s = 0.0;
  for (double v : value(a).data()) s += v;
  return Push(Matrix(1, 1, s), Tracks(a), [a](Tape &t, int self) {
    const double g = t.SelfGrad(self)[0];
    for (double &v : t.GradOf(a.id).data()) v += g;
  });
}

Var Tape::MaxCols(Var a) {
  const Matrix &x = value(a);
  if (x.rows() == 0) throw ShapeError("max_cols: empty matrix " + x.ShapeString());
  Matrix out(1, x.cols());
  std::vector<size_t> arg(x.cols(), 0);
  for (size_t j = 0; j < x.cols(); ++j) {
    double best = x(0, j);
    for (size_t i = 1; i < x.rows(); ++i) {
      if (x(i, j) > best) {
        best = x(i, j);
        arg[j] = i;
      }
    }
    out(0, j) = best;
  }
  return Push(std::move(out), Tracks(a), [a, arg](Tape &t, int self) {
    const Matrix &g = t.SelfGrad(self);
    Matrix &ga = t.GradOf(a.id);
    for (size_t j = 0; j < arg.size(); ++j) ga(arg[j], j) += g[j];
  });
}

Var Tape::MaxRows(Var a) {
  const Matrix &x = value(a);
  if (x.cols() == 0) throw ShapeError("max_rows: empty matrix " + x.ShapeString());
  Matrix out(x.rows(), 1);
  std::vector<size_t> arg(x.rows(), 0);
  for (size_t i = 0; i < x.rows(); ++i) {
    double best = x(i, 0);
    for (size_t j = 1; j < x.cols(); ++j) {
      if (x(i, j) > best) {
        best = x(i, j);
        arg[i] = j;
      }
    }
    out(i, 0) = best;
  }
  return Push(std::move(out), Tracks(a), [a, arg](Tape &t, int self) {
    const Matrix &g = t.SelfGrad(self);
    Matrix &ga = t.GradOf(a.id);
    for (size_t i = 0; i < arg.size(); ++i) ga(i, arg[i]) += g[i];
  });
}

Var Tape::Cosine(Var a, Var b) {
  const Matrix &x = value(a);
  const Matrix &y = value(b);
  RequireSameShape(x, y, "cosine");
  const double nx = Norm(x.data());
  const double ny = Norm(y.data());
  const bool degenerate = nx == 0.0 || ny == 0.0;
  const double s = degenerate ? 0.0 : Dot(x.data(), y.data()) / (nx * ny);
  return Push(Matrix(1, 1, s), !degenerate && (Tracks(a) || Tracks(b)),
              [a, b, nx, ny, s](Tape &t, int self) {
                const double g = t.SelfGrad(self)[0];
                auto xv = t.value(a).data();
                auto yv = t.value(b).data();
                const double inv = 1.0 / (nx * ny);
                if (t.Tracks(a)) {
                  auto ga = t.GradOf(a.id).data();
                  for (size_t i = 0; i < ga.size(); ++i) {
                    ga[i] += g * (yv[i] * inv - s * xv[i] / (nx * nx));
                  }
                }
                if (t.Tracks(b)) {
                  auto gb = t.GradOf(b.id).data();
                  for (size_t i = 0; i < gb.size(); ++i) {
                    gb[i] += g * (xv[i] * inv - s * yv[i] / (ny * ny));
                  }
                }
              });
}

Var Tape::SoftmaxCols(Var a, Var extra) {
  const Matrix &x = value(a);
  const size_t rows = x.rows();
  const size_t cols = x.cols();
  if (extra.valid()) {
    const Matrix &e = value(extra);
    if (e.rows() != 1 || e.cols() != cols) {
      throw ShapeError("softmax_cols: extra logits " + e.ShapeString() +
                       " do not fit " + x.ShapeString());
    }
  }
  Matrix out(rows, cols);
  std::vector<double> extra_share(cols, 0.0);
  for (size_t j = 0; j < cols; ++j) {
    double mx = -std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < rows; ++i) mx = std::max(mx, x(i, j));
    double ex = 0.0;
    if (extra.valid()) mx = std::max(mx, value(extra)(0, j));
    double sum = 0.0;
    for (size_t i = 0; i < rows; ++i) {
      out(i, j) = std::exp(x(i, j) - mx);
      sum += out(i, j);
    }
    if (extra.valid()) {
      ex = std::exp(value(extra)(0, j) - mx);
      sum += ex;
    }
    for (size_t i = 0; i < rows; ++i) out(i, j) /= sum;
    extra_share[j] = ex / sum;
  }
  const bool track = Tracks(a) || (extra.valid() && Tracks(extra));
  return Push(std::move(out), track, [a, extra, extra_share](Tape &t, int self) {
    const Matrix &g = t.SelfGrad(self);
    const Matrix &y = t.value(Var{self});
    for (size_t j = 0; j < y.cols(); ++j) {
      double dot = 0.0;
      for (size_t i = 0; i < y.rows(); ++i) dot += g(i, j) * y(i, j);
      if (t.Tracks(a)) {
        Matrix &ga = t.GradOf(a.id);
        for (size_t i = 0; i < y.rows(); ++i) ga(i, j) += y(i, j) * (g(i, j) - dot);
      }
      if (extra.valid() && t.Tracks(extra)) {
        t.GradOf(extra.id)(0, j) -= extra_share[j] * dot;
      }
    }
  });
}

Var Tape::SoftmaxRows(Var a, Var extra) {
  const Matrix &x = value(a);
  const size_t rows = x.rows();
  const size_t cols = x.cols();
  if (extra.valid()) {
    const Matrix &e = value(extra);
    if (e.rows() != rows || e.cols() != 1) {
      throw ShapeError("softmax_rows: extra logits " + e.ShapeString() +
                       " do not fit " + x.ShapeString());
    }
  }
  Matrix out(rows, cols);
  std::vector<double> extra_share(rows, 0.0);
  for (size_t i = 0; i < rows; ++i) {
    double mx = -std::numeric_limits<double>::infinity();
    for (size_t j = 0; j < cols; ++j) mx = std::max(mx, x(i, j));
    if (extra.valid()) mx = std::max(mx, value(extra)(i, 0));
    double sum = 0.0;
    for (size_t j = 0; j < cols; ++j) {
      out(i, j) = std::exp(x(i, j) - mx);
      sum += out(i, j);
    }
    double ex = 0.0;
    if (extra.valid()) {
      ex = std::exp(value(extra)(i, 0) - mx);
      sum += ex;
    }
    for (size_t j = 0; j < cols; ++j) out(i, j) /= sum;
    extra_share[i] = ex / sum;
  }
  const bool track = Tracks(a) || (extra.valid() && Tracks(extra));
  return Push(std::move(out), track, [a, extra, extra_share](Tape &t, int self) {
    const Matrix &g = t.SelfGrad(self);
    const Matrix &y = t.value(Var{self});
    for (size_t i = 0; i < y.rows(); ++i) {
      double dot = 0.0;
      for (size_t j = 0; j < y.cols(); ++j) dot += g(i, j) * y(i, j);
      if (t.Tracks(a)) {
        Matrix &ga = t.GradOf(a.id);
        for (size_t j = 0; j < y.cols(); ++j) ga(i, j) += y(i, j) * (g(i, j) - dot);
      }
      if (extra.valid() && t.Tracks(extra)) {
        t.GradOf(extra.id)(i, 0) -= extra_share[i] * dot;
      }
    }
  });
}

Var Tape::Row(Var a, size_t r) {
  const Matrix &x = value(a);
  if (r >= x.rows()) {
    throw ShapeError("row " + std::to_string(r) + " out of range for " +
                     x.ShapeString());
  }
  Matrix out = Matrix::RowVector(x.row(r));
  return Push(std::move(out), Tracks(a), [a, r](Tape &t, int self) {
    const Matrix &g = t.SelfGrad(self);
    auto dst = t.GradOf(a.id).row(r);
    for (size_t j = 0; j < dst.size(); ++j) dst[j] += g[j];
  });
}

Var Tape::GatherRows(Var table, std::span<const int32_t> ids) {
  const Matrix &x = value(table);
  Matrix out(ids.size(), x.cols());
  for (size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] < 0 || static_cast<size_t>(ids[i]) >= x.rows()) {
      throw ShapeError("gather_rows: id " + std::to_string(ids[i]) +
                       " out of range for " + x.ShapeString());
    }
    auto src = x.row(ids[i]);
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  std::vector<int32_t> idv(ids.begin(), ids.end());
  return Push(std::move(out), Tracks(table), [table, idv](Tape &t, int self) {
    const Matrix &g = t.SelfGrad(self);
    Matrix &gt = t.GradOf(table.id);
    for (size_t i = 0; i < idv.size(); ++i) {
      auto src = g.row(i);
      auto dst = gt.row(idv[i]);
      for (size_t j = 0; j < dst.size(); ++j) dst[j] += src[j];
    }
  });
}

Var Tape::SliceCols(Var a, size_t begin, size_t count) {
  const Matrix &x = value(a);
  if (begin + count > x.cols()) {
    throw ShapeError("slice_cols [" + std::to_string(begin) + ", " +
                     std::to_string(begin + count) + ") out of range for " +
                     x.ShapeString());
  }
  Matrix out(x.rows(), count);
  for (size_t i = 0; i < x.rows(); ++i) {
    for (size_t j = 0; j < count; ++j) out(i, j) = x(i, begin + j);
  }
  return Push(std::move(out), Tracks(a), [a, begin](Tape &t, int self) {
    const Matrix &g = t.SelfGrad(self);
    Matrix &ga = t.GradOf(a.id);
    for (size_t i = 0; i < g.rows(); ++i) {
      for (size_t j = 0; j < g.cols(); ++j) ga(i, begin + j) += g(i, j);
    }
  });
}

Var Tape::ConcatCols(Var a, Var b) {
  const Matrix &x = value(a);
  const Matrix &y = value(b);
  if (x.rows() != y.rows()) {
    throw ShapeError("concat_cols: row mismatch " + x.ShapeString() + " vs " +
                     y.ShapeString());
  }
  Matrix out(x.rows(), x.cols() + y.cols());
  for (size_t i = 0; i < x.rows(); ++i) {
    for (size_t j = 0; j < x.cols(); ++j) out(i, j) = x(i, j);
    for (size_t j = 0; j < y.cols(); ++j) out(i, x.cols() + j) = y(i, j);
  }
  const size_t split = x.cols();
  return Push(std::move(out), Tracks(a) || Tracks(b),
              [a, b, split](Tape &t, int self) {
                const Matrix &g = t.SelfGrad(self);
                for (size_t i = 0; i < g.rows(); ++i) {
                  if (t.Tracks(a)) {
                    auto ga = t.GradOf(a.id).row(i);
                    for (size_t j = 0; j < ga.size(); ++j) ga[j] += g(i, j);
                  }
                  if (t.Tracks(b)) {
                    auto gb = t.GradOf(b.id).row(i);
                    for (size_t j = 0; j < gb.size(); ++j) gb[j] += g(i, split + j);
                  }
                }
              });
}

Var Tape::StackRows(std::span<const Var> rows) {
  if (rows.empty()) return Constant(Matrix());
  const size_t cols = value(rows[0]).cols();
  Matrix out(rows.size(), cols);
  bool track = false;
  for (size_t i = 0; i < rows.size(); ++i) {
    const Matrix &r = value(rows[i]);
    if (r.rows() != 1 || r.cols() != cols) {
      throw ShapeError("stack_rows: row " + std::to_string(i) + " has shape " +
                       r.ShapeString() + ", expected 1x" + std::to_string(cols));
    }
    std::copy(r.data().begin(), r.data().end(), out.row(i).begin());
    track = track || Tracks(rows[i]);
  }
  std::vector<Var> parts(rows.begin(), rows.end());
  return Push(std::move(out), track, [parts](Tape &t, int self) {
    const Matrix &g = t.SelfGrad(self);
    for (size_t i = 0; i < parts.size(); ++i) {
      if (!t.Tracks(parts[i])) continue;
      auto src = g.row(i);
      auto dst = t.GradOf(parts[i].id).data();
      for (size_t j = 0; j < dst.size(); ++j) dst[j] += src[j];
    }
  });
}

Var Tape::LstmCell(Var gates_in, Var state, Var w_h) {
  const Matrix &xg = value(gates_in);
  const Matrix &hc = value(state);
  const Matrix &wh = value(w_h);
  const size_t hidden = wh.rows();
  if (wh.cols() != 4 * hidden || xg.rows() != 1 || xg.cols() != 4 * hidden ||
      hc.rows() != 1 || hc.cols() != 2 * hidden) {
    throw ShapeError("lstm_cell: inconsistent shapes gates_in " +
                     xg.ShapeString() + ", state " + hc.ShapeString() +
                     ", w_h " + wh.ShapeString());
  }
  // z = gates_in + h_prev * w_h, then activations in place.
  std::vector<double> act(xg.data().begin(), xg.data().end());
  for (size_t k = 0; k < hidden; ++k) {
    const double hk = hc[k];
    if (hk == 0.0) continue;
    auto wrow = wh.row(k);
    for (size_t j = 0; j < 4 * hidden; ++j) act[j] += hk * wrow[j];
  }
  for (size_t j = 0; j < 3 * hidden; ++j) act[j] = SigmoidScalar(act[j]);
  for (size_t j = 3 * hidden; j < 4 * hidden; ++j) act[j] = std::tanh(act[j]);

  Matrix out(1, 2 * hidden);
  std::vector<double> tanh_c(hidden);
  for (size_t k = 0; k < hidden; ++k) {
    const double i = act[k], f = act[hidden + k], o = act[2 * hidden + k],
                 g = act[3 * hidden + k];
    const double c = f * hc[hidden + k] + i * g;
    tanh_c[k] = std::tanh(c);
    out[k] = o * tanh_c[k];
    out[hidden + k] = c;
  }
  const bool track = Tracks(gates_in) || Tracks(state) || Tracks(w_h);
  return Push(
      std::move(out), track,
      [gates_in, state, w_h, hidden, act = std::move(act),
       tanh_c = std::move(tanh_c)](Tape &t, int self) {
        const Matrix &grad_out = t.SelfGrad(self);
        const Matrix &hc_prev = t.value(state);
        std::vector<double> dz(4 * hidden);
        std::vector<double> dc_prev(hidden);
        for (size_t k = 0; k < hidden; ++k) {
          const double i = act[k], f = act[hidden + k], o = act[2 * hidden + k],
                       g = act[3 * hidden + k];
          const double dh = grad_out[k];
          const double dc = grad_out[hidden + k] +
                            dh * o * (1.0 - tanh_c[k] * tanh_c[k]);
          const double d_o = dh * tanh_c[k];
          const double d_i = dc * g;
          const double d_g = dc * i;
          const double d_f = dc * hc_prev[hidden + k];
          dc_prev[k] = dc * f;
          dz[k] = d_i * i * (1.0 - i);
          dz[hidden + k] = d_f * f * (1.0 - f);
          dz[2 * hidden + k] = d_o * o * (1.0 - o);
          dz[3 * hidden + k] = d_g * (1.0 - g * g);
        }
        if (t.Tracks(gates_in)) {
          auto gx = t.GradOf(gates_in.id).data();
          for (size_t j = 0; j < gx.size(); ++j) gx[j] += dz[j];
        }
        if (t.Tracks(w_h)) {
          Matrix &gw = t.GradOf(w_h.id);
          for (size_t k = 0; k < hidden; ++k) {
            const double hk = hc_prev[k];
            if (hk == 0.0) continue;
            auto row = gw.row(k);
            for (size_t j = 0; j < row.size(); ++j) row[j] += hk * dz[j];
          }
        }
        if (t.Tracks(state)) {
          const Matrix &wh = t.value(w_h);
          Matrix &gs = t.GradOf(state.id);
          for (size_t k = 0; k < hidden; ++k) {
            gs[k] += Dot(wh.row(k), dz);
            gs[hidden + k] += dc_prev[k];
          }
        }
      });
}

}  // namespace synonymnet
