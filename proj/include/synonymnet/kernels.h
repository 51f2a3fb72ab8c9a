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

#ifndef SYNONYMNET_KERNELS_H_
#define SYNONYMNET_KERNELS_H_

#include <span>

#include "synonymnet/matrix.h"

namespace synonymnet {

// Dense kernels. The unsuffixed versions split work across OpenMP threads
// when the problem is large enough; the *Serial versions are single-threaded
// references with the same per-element accumulation order, so both produce
// bitwise-identical results.

// a * b. Throws ShapeError naming both shapes when a.cols != b.rows.
Matrix MatMul(const Matrix &a, const Matrix &b);
Matrix MatMulSerial(const Matrix &a, const Matrix &b);

// a * b^T.
Matrix MatMulTransB(const Matrix &a, const Matrix &b);
// a^T * b.
Matrix MatMulTransA(const Matrix &a, const Matrix &b);

Matrix Transpose(const Matrix &a);

// Stable softmax (max subtraction) over each row / each column.
Matrix SoftmaxRows(const Matrix &x);
Matrix SoftmaxCols(const Matrix &x);

double Dot(std::span<const double> a, std::span<const double> b);
double Norm(std::span<const double> a);

// Cosine similarity clamped to [-1, 1]; 0 when either vector has zero norm.
double CosineSimilarity(std::span<const double> a, std::span<const double> b);

// Number of threads the parallel kernels may use (1 without OpenMP).
int MaxThreads();

}  // namespace synonymnet

#endif  // SYNONYMNET_KERNELS_H_
