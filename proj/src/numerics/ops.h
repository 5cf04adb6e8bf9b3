// numerics/ops.h
//
// Copyright 2026  The TS-RNNT Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef TSRNNT_NUMERICS_OPS_H_
#define TSRNNT_NUMERICS_OPS_H_

#include <cstdint>
#include <span>
#include <vector>

#include "numerics/tape.h"

namespace tsrnnt {

// Row-major boolean matrix; true means "allowed".
class BoolMatrix {
 public:
  BoolMatrix() = default;
  BoolMatrix(int32_t rows, int32_t cols, bool value = false)
      : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols,
                                        value ? 1 : 0) {}

  int32_t NumRows() const { return rows_; }
  int32_t NumCols() const { return cols_; }
  bool operator()(int32_t r, int32_t c) const {
    return data_[static_cast<size_t>(r) * cols_ + c] != 0;
  }
  void Set(int32_t r, int32_t c, bool value) {
    data_[static_cast<size_t>(r) * cols_ + c] = value ? 1 : 0;
  }
  int64_t CountTrue() const;

  friend bool operator==(const BoolMatrix &, const BoolMatrix &) = default;

 private:
  int32_t rows_ = 0;
  int32_t cols_ = 0;
  std::vector<uint8_t> data_;
};

// The differentiable op set. Unless stated otherwise, inputs are rank-2.
// Binary elementwise ops accept either equal shapes or a second operand of
// shape [1 x C] (or [C]) that is broadcast over the rows of the first.

Var MatMul(Var a, Var b, bool transpose_b = false);
Var Add(Var a, Var b);
Var Mul(Var a, Var b);  // Hadamard product
Var Scale(Var a, float factor);

Var Logistic(Var a);
Var Tanh(Var a);
Var Swish(Var a);
// Gated linear unit over columns: [A | B] -> A * logistic(B).
Var Glu(Var a);

// Softmax over the allowed entries of each row; disallowed entries are
// exactly 0. Throws when a row has no allowed entry.
Var MaskedSoftmax(Var logits, const BoolMatrix &mask);
Var LogSoftmax(Var logits);

// Row-wise normalization followed by a per-column affine map. `gain` and
// `bias` hold one value per column.
Var LayerNorm(Var x, Var gain, Var bias, float eps = 1e-5f);

// x: [T x D], kernel: [k x D]. Non-causal (k odd) centres the kernel on t;
// causal aligns the last tap with t, so output t only reads frames <= t.
Var DepthwiseConv1d(Var x, Var kernel, bool causal);

// 3x3 convolution over (time, frequency). x: [T x (in_channels*freq)] with
// columns laid out channel-major. weight: [out_channels x (in_channels*9)],
// bias: [out_channels]. No padding in time (output has T-2 rows); zero
// "same" padding in frequency.
Var Conv2d(Var x, Var weight, Var bias, int32_t in_channels, int32_t freq);

// 2x2 max / mean pooling with stride 2 in time and frequency, floor semantics.
// x: [T x (channels*freq)] -> [T/2 x (channels*(freq/2))].
Var MaxPool2d(Var x, int32_t channels, int32_t freq);
Var AvgPool2d(Var x, int32_t channels, int32_t freq);

// Gathers rows of `table`; the embedding lookup.
Var EmbeddingLookup(Var table, std::span<const int32_t> ids);

// axis 0 stacks rows, axis 1 joins columns.
Var Concat(std::span<const Var> parts, int32_t axis);
Var SliceRows(Var a, int32_t begin, int32_t end);
Var SliceCols(Var a, int32_t begin, int32_t end);

// Mean over rows: [T x C] -> [1 x C].
Var MeanOverTime(Var a);
// Sum of all entries: -> [1].
Var Sum(Var a);

namespace gemm {

// C[n x m] (+)= A[n x k] * B[k x m]. Each output row depends only on the
// matching row of A, with the k-sum taken in index order.
void NN(int32_t n, int32_t k, int32_t m, const float *a, const float *b,
        float *c, bool accumulate);
// C[n x m] (+)= A[n x k] * B[m x k]^T.
void NT(int32_t n, int32_t k, int32_t m, const float *a, const float *b,
        float *c, bool accumulate);
// C[k x m] += A[n x k]^T * B[n x m].
void TN(int32_t n, int32_t k, int32_t m, const float *a, const float *b,
        float *c);

}  // namespace gemm

}  // namespace tsrnnt

#endif  // TSRNNT_NUMERICS_OPS_H_
