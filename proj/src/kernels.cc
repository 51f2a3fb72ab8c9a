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

#include "synonymnet/kernels.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "synonymnet/error.h"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace synonymnet {
namespace {

// Below this many multiply-adds the thread fork costs more than it saves.
constexpr size_t kParallelFlops = 1 << 15;

void CheckMatMul(const Matrix &a, const Matrix &b, size_t a_inner,
                 size_t b_inner, const char *op) {
  if (a_inner != b_inner) {
    throw ShapeError(std::string(op) + ": shape mismatch " + a.ShapeString() +
                     " vs " + b.ShapeString());
  }
}

inline void MatMulRow(const Matrix &a, const Matrix &b, Matrix &c, size_t i) {
  const size_t inner = a.cols();
  const size_t n = b.cols();
  double *out = c.row(i).data();
  for (size_t k = 0; k < inner; ++k) {
    const double aik = a(i, k);
    const double *brow = b.row(k).data();
    for (size_t j = 0; j < n; ++j) out[j] += aik * brow[j];
  }
}

}  // namespace

Matrix MatMul(const Matrix &a, const Matrix &b) {
  CheckMatMul(a, b, a.cols(), b.rows(), "matmul");
  Matrix c(a.rows(), b.cols());
  const auto rows = static_cast<std::ptrdiff_t>(a.rows());
  if (a.rows() * a.cols() * b.cols() >= kParallelFlops && MaxThreads() > 1) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < rows; ++i) MatMulRow(a, b, c, i);
  } else {
    for (std::ptrdiff_t i = 0; i < rows; ++i) MatMulRow(a, b, c, i);
  }
  return c;
}

Matrix MatMulSerial(const Matrix &a, const Matrix &b) {
  CheckMatMul(a, b, a.cols(), b.rows(), "matmul");
  Matrix c(a.rows(), b.cols());
  for (size_t i = 0; i < a.rows(); ++i) MatMulRow(a, b, c, i);
  return c;
}

Matrix MatMulTransB(const Matrix &a, const Matrix &b) {
  CheckMatMul(a, b, a.cols(), b.cols(), "matmul_trans_b");
  Matrix c(a.rows(), b.rows());
  for (size_t i = 0; i < a.rows(); ++i) {
    auto ai = a.row(i);
    for (size_t j = 0; j < b.rows(); ++j) c(i, j) = Dot(ai, b.row(j));
  }
  return c;
}

Matrix MatMulTransA(const Matrix &a, const Matrix &b) {
  CheckMatMul(a, b, a.rows(), b.rows(), "matmul_trans_a");
  Matrix c(a.cols(), b.cols());
  for (size_t k = 0; k < a.rows(); ++k) {
    auto brow = b.row(k);
    for (size_t i = 0; i < a.cols(); ++i) {
      const double aki = a(k, i);
      if (aki == 0.0) continue;
      auto out = c.row(i);
      for (size_t j = 0; j < b.cols(); ++j) out[j] += aki * brow[j];
    }
  }
  return c;
}

Matrix Transpose(const Matrix &a) {
  Matrix t(a.cols(), a.rows());
  for (size_t i = 0; i < a.rows(); ++i) {
    for (size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  }
  return t;
}

Matrix SoftmaxRows(const Matrix &x) {
  Matrix y(x.rows(), x.cols());
  for (size_t i = 0; i < x.rows(); ++i) {
    auto in = x.row(i);
    auto out = y.row(i);
    double mx = -std::numeric_limits<double>::infinity();
    for (double v : in) mx = std::max(mx, v);
    double sum = 0.0;
    for (size_t j = 0; j < in.size(); ++j) {
      out[j] = std::exp(in[j] - mx);
      sum += out[j];
    }
    for (double &v : out) v /= sum;
  }
  return y;
}

Matrix SoftmaxCols(const Matrix &x) {
  Matrix y(x.rows(), x.cols());
  for (size_t j = 0; j < x.cols(); ++j) {
    double mx = -std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < x.rows(); ++i) mx = std::max(mx, x(i, j));
    double sum = 0.0;
    for (size_t i = 0; i < x.rows(); ++i) {
      y(i, j) = std::exp(x(i, j) - mx);
      sum += y(i, j);
    }
    for (size_t i = 0; i < x.rows(); ++i) y(i, j) /= sum;
  }
  return y;
}

double Dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw ShapeError("dot: length mismatch " + std::to_string(a.size()) +
                     " vs " + std::to_string(b.size()));
  }
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double Norm(std::span<const double> a) { return std::sqrt(Dot(a, a)); }

double CosineSimilarity(std::span<const double> a, std::span<const double> b) {
  const double na = Norm(a);
  const double nb = Norm(b);
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::clamp(Dot(a, b) / (na * nb), -1.0, 1.0);
}

int MaxThreads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace synonymnet
