// numerics/ops.cc
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

#include "numerics/ops.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "base/error.h"

namespace tsrnnt {

int64_t BoolMatrix::CountTrue() const {
  int64_t n = 0;
  for (uint8_t v : data_) n += v;
  return n;
}

namespace gemm {

void NN(int32_t n, int32_t k, int32_t m, const float *a, const float *b,
        float *c, bool accumulate) {
  for (int32_t i = 0; i < n; ++i) {
    float *crow = c + static_cast<int64_t>(i) * m;
    if (!accumulate) std::fill(crow, crow + m, 0.0f);
    const float *arow = a + static_cast<int64_t>(i) * k;
    for (int32_t p = 0; p < k; ++p) {
      const float av = arow[p];
      if (av == 0.0f) continue;
      const float *brow = b + static_cast<int64_t>(p) * m;
      for (int32_t j = 0; j < m; ++j) crow[j] += av * brow[j];
    }
  }
}

void NT(int32_t n, int32_t k, int32_t m, const float *a, const float *b,
        float *c, bool accumulate) {
  std::vector<float> bt(static_cast<size_t>(k) * m);
  for (int32_t j = 0; j < m; ++j) {
    for (int32_t p = 0; p < k; ++p) {
      bt[static_cast<size_t>(p) * m + j] = b[static_cast<int64_t>(j) * k + p];
    }
  }
  NN(n, k, m, a, bt.data(), c, accumulate);
}

void TN(int32_t n, int32_t k, int32_t m, const float *a, const float *b,
        float *c) {
  for (int32_t i = 0; i < n; ++i) {
    const float *arow = a + static_cast<int64_t>(i) * k;
    const float *brow = b + static_cast<int64_t>(i) * m;
    for (int32_t p = 0; p < k; ++p) {
      const float av = arow[p];
      if (av == 0.0f) continue;
      float *crow = c + static_cast<int64_t>(p) * m;
      for (int32_t j = 0; j < m; ++j) crow[j] += av * brow[j];
    }
  }
}

}  // namespace gemm

namespace {

Tape *TapeOf(Var a) {
  if (!a.Valid()) TSRNNT_ERR << "use of an unset variable";
  return a.tape();
}

void RequireMatrix(const Tensor &t, const char *op) {
  if (t.Rank() != 2) {
    TSRNNT_ERR_CODE(ErrorCode::kShape)
        << op << " expects a matrix, got " << t.ShapeString();
  }
}

// Interprets `b` relative to matrix `a`: 0 = same shape, 1 = row broadcast.
int BroadcastKind(const Tensor &a, const Tensor &b, const char *op) {
  if (a.SameShape(b)) return 0;
  RequireMatrix(a, op);
  int32_t cols = a.NumCols();
  bool row_vec = (b.Rank() == 2 && b.Dim(0) == 1 && b.Dim(1) == cols) ||
                 (b.Rank() == 1 && b.Dim(0) == cols);
  if (!row_vec) {
    TSRNNT_ERR_CODE(ErrorCode::kShape)
        << op << ": incompatible shapes " << a.ShapeString() << " and "
        << b.ShapeString();
  }
  return 1;
}

template <typename F>
Var Unary(const char *op, Var a, F forward_and_derivative_from_output) {
  const Tensor &x = a.Value();
  Tensor y(x.Shape());
  int64_t n = x.NumElements();
  for (int64_t i = 0; i < n; ++i) {
    y[i] = forward_and_derivative_from_output.Forward(x[i]);
  }
  auto rule = forward_and_derivative_from_output;
  return TapeOf(a)->Record(
      op, std::move(y), {a}, [rule, n](const BackwardContext &ctx) {
        Tensor *gx = ctx.in_grads[0];
        if (!gx) return;
        const Tensor &x = *ctx.in_values[0];
        for (int64_t i = 0; i < n; ++i) {
          (*gx)[i] += ctx.out_grad[i] * rule.Derivative(x[i], ctx.out_value[i]);
        }
      });
}

struct LogisticRule {
  float Forward(float x) const { return 1.0f / (1.0f + std::exp(-x)); }
  float Derivative(float, float y) const { return y * (1.0f - y); }
};

struct TanhRule {
  float Forward(float x) const { return std::tanh(x); }
  float Derivative(float, float y) const { return 1.0f - y * y; }
};

struct SwishRule {
  float Forward(float x) const { return x / (1.0f + std::exp(-x)); }
  float Derivative(float x, float) const {
    float s = 1.0f / (1.0f + std::exp(-x));
    return s + x * s * (1.0f - s);
  }
};

}  // namespace

Var MatMul(Var a, Var b, bool transpose_b) {
  const Tensor &x = a.Value();
  const Tensor &w = b.Value();
  RequireMatrix(x, "MatMul");
  RequireMatrix(w, "MatMul");
  int32_t n = x.NumRows(), k = x.NumCols();
  int32_t m = transpose_b ? w.NumRows() : w.NumCols();
  int32_t wk = transpose_b ? w.NumCols() : w.NumRows();
  if (wk != k) {
    TSRNNT_ERR_CODE(ErrorCode::kShape)
        << "MatMul: " << x.ShapeString() << " x " << w.ShapeString()
        << (transpose_b ? "^T" : "");
  }
  Tensor y = Tensor::Matrix(n, m);
  if (transpose_b) {
    gemm::NT(n, k, m, x.Data(), w.Data(), y.Data(), false);
  } else {
    gemm::NN(n, k, m, x.Data(), w.Data(), y.Data(), false);
  }
  return TapeOf(a)->Record(
      "matmul", std::move(y), {a, b},
      [n, k, m, transpose_b](const BackwardContext &ctx) {
        const Tensor &x = *ctx.in_values[0];
        const Tensor &w = *ctx.in_values[1];
        const float *gy = ctx.out_grad.Data();
        if (Tensor *gx = ctx.in_grads[0]) {
          if (transpose_b) {
            // y = x w^T, w: [m x k] -> gx += gy w
            gemm::NN(n, m, k, gy, w.Data(), gx->Data(), true);
          } else {
            // y = x w, w: [k x m] -> gx += gy w^T
            gemm::NT(n, m, k, gy, w.Data(), gx->Data(), true);
          }
        }
        if (Tensor *gw = ctx.in_grads[1]) {
          if (transpose_b) {
            // gw[m x k] += gy^T x
            gemm::TN(n, m, k, gy, x.Data(), gw->Data());
          } else {
            // gw[k x m] += x^T gy
            gemm::TN(n, k, m, x.Data(), gy, gw->Data());
          }
        }
      });
}

Var Add(Var a, Var b) {
  const Tensor &x = a.Value();
  const Tensor &z = b.Value();
  int kind = BroadcastKind(x, z, "Add");
  Tensor y = x;
  y.SetRequiresGrad(false);
  if (kind == 0) {
    y.AddScaled(z);
  } else {
    int32_t rows = x.NumRows(), cols = x.NumCols();
    for (int32_t r = 0; r < rows; ++r) {
      float *row = y.Row(r).data();
      for (int32_t c = 0; c < cols; ++c) row[c] += z[c];
    }
  }
  return TapeOf(a)->Record(
      "add", std::move(y), {a, b}, [kind](const BackwardContext &ctx) {
        if (Tensor *ga = ctx.in_grads[0]) ga->AddScaled(ctx.out_grad);
        if (Tensor *gb = ctx.in_grads[1]) {
          if (kind == 0) {
            gb->AddScaled(ctx.out_grad);
          } else {
            int32_t rows = ctx.out_grad.NumRows(), cols = ctx.out_grad.NumCols();
            for (int32_t r = 0; r < rows; ++r) {
              const float *row = ctx.out_grad.Row(r).data();
              for (int32_t c = 0; c < cols; ++c) (*gb)[c] += row[c];
            }
          }
        }
      });
}

Var Mul(Var a, Var b) {
  const Tensor &x = a.Value();
  const Tensor &z = b.Value();
  int kind = BroadcastKind(x, z, "Mul");
  Tensor y(x.Shape());
  int64_t n = x.NumElements();
  if (kind == 0) {
    for (int64_t i = 0; i < n; ++i) y[i] = x[i] * z[i];
  } else {
    int32_t cols = x.NumCols();
    for (int64_t i = 0; i < n; ++i) y[i] = x[i] * z[i % cols];
  }
  return TapeOf(a)->Record(
      "mul", std::move(y), {a, b}, [kind, n](const BackwardContext &ctx) {
        const Tensor &x = *ctx.in_values[0];
        const Tensor &z = *ctx.in_values[1];
        const Tensor &gy = ctx.out_grad;
        int32_t cols = kind == 0 ? 0 : x.NumCols();
        if (Tensor *ga = ctx.in_grads[0]) {
          for (int64_t i = 0; i < n; ++i) {
            (*ga)[i] += gy[i] * (kind == 0 ? z[i] : z[i % cols]);
          }
        }
        if (Tensor *gb = ctx.in_grads[1]) {
          for (int64_t i = 0; i < n; ++i) {
            (*gb)[kind == 0 ? i : i % cols] += gy[i] * x[i];
          }
        }
      });
}

Var Scale(Var a, float factor) {
  Tensor y = a.Value();
  y.SetRequiresGrad(false);
  for (float &v : y.Values()) v *= factor;
  return TapeOf(a)->Record("scale", std::move(y), {a},
                           [factor](const BackwardContext &ctx) {
                             if (Tensor *ga = ctx.in_grads[0]) {
                               ga->AddScaled(ctx.out_grad, factor);
                             }
                           });
}

Var Logistic(Var a) { return Unary("logistic", a, LogisticRule{}); }
Var Tanh(Var a) { return Unary("tanh", a, TanhRule{}); }
Var Swish(Var a) { return Unary("swish", a, SwishRule{}); }

Var Glu(Var a) {
  const Tensor &x = a.Value();
  RequireMatrix(x, "Glu");
  int32_t rows = x.NumRows(), cols2 = x.NumCols();
  if (cols2 % 2 != 0) {
    TSRNNT_ERR_CODE(ErrorCode::kShape) << "Glu needs an even column count";
  }
  int32_t cols = cols2 / 2;
  Tensor y = Tensor::Matrix(rows, cols);
  for (int32_t r = 0; r < rows; ++r) {
    auto in = x.Row(r);
    auto out = y.Row(r);
    for (int32_t c = 0; c < cols; ++c) {
      out[c] = in[c] / (1.0f + std::exp(-in[c + cols]));
    }
  }
  return TapeOf(a)->Record(
      "glu", std::move(y), {a}, [rows, cols](const BackwardContext &ctx) {
        Tensor *gx = ctx.in_grads[0];
        if (!gx) return;
        const Tensor &x = *ctx.in_values[0];
        for (int32_t r = 0; r < rows; ++r) {
          auto in = x.Row(r);
          auto gin = gx->Row(r);
          auto gout = ctx.out_grad.Row(r);
          for (int32_t c = 0; c < cols; ++c) {
            float s = 1.0f / (1.0f + std::exp(-in[c + cols]));
            gin[c] += gout[c] * s;
            gin[c + cols] += gout[c] * in[c] * s * (1.0f - s);
          }
        }
      });
}

Var MaskedSoftmax(Var logits, const BoolMatrix &mask) {
  const Tensor &x = logits.Value();
  RequireMatrix(x, "MaskedSoftmax");
  int32_t rows = x.NumRows(), cols = x.NumCols();
  if (mask.NumRows() != rows || mask.NumCols() != cols) {
    TSRNNT_ERR_CODE(ErrorCode::kShape)
        << "MaskedSoftmax: mask " << mask.NumRows() << "x" << mask.NumCols()
        << " vs logits " << x.ShapeString();
  }
  Tensor y = Tensor::Matrix(rows, cols);
  for (int32_t r = 0; r < rows; ++r) {
    float m = -std::numeric_limits<float>::infinity();
    for (int32_t c = 0; c < cols; ++c) {
      if (mask(r, c)) m = std::max(m, x(r, c));
    }
    if (m == -std::numeric_limits<float>::infinity()) {
      TSRNNT_ERR_CODE(ErrorCode::kShape)
          << "MaskedSoftmax: row " << r << " has no allowed position";
    }
    double sum = 0.0;
    for (int32_t c = 0; c < cols; ++c) {
      if (mask(r, c)) {
        float e = std::exp(x(r, c) - m);
        y(r, c) = e;
        sum += e;
      }
    }
    float inv = static_cast<float>(1.0 / sum);
    for (int32_t c = 0; c < cols; ++c) {
      if (mask(r, c)) y(r, c) *= inv;
    }
  }
  return TapeOf(logits)->Record(
      "masked_softmax", std::move(y), {logits},
      [rows, cols](const BackwardContext &ctx) {
        Tensor *gx = ctx.in_grads[0];
        if (!gx) return;
        const Tensor &y = ctx.out_value;
        const Tensor &gy = ctx.out_grad;
        for (int32_t r = 0; r < rows; ++r) {
          double dot = 0.0;
          for (int32_t c = 0; c < cols; ++c) dot += y(r, c) * gy(r, c);
          for (int32_t c = 0; c < cols; ++c) {
            (*gx)(r, c) += y(r, c) * (gy(r, c) - static_cast<float>(dot));
          }
        }
      });
}

Var LogSoftmax(Var logits) {
  const Tensor &x = logits.Value();
  RequireMatrix(x, "LogSoftmax");
  int32_t rows = x.NumRows(), cols = x.NumCols();
  Tensor y = Tensor::Matrix(rows, cols);
  for (int32_t r = 0; r < rows; ++r) {
    auto in = x.Row(r);
    float m = *std::max_element(in.begin(), in.end());
    double sum = 0.0;
    for (int32_t c = 0; c < cols; ++c) sum += std::exp(in[c] - m);
    float log_z = m + static_cast<float>(std::log(sum));
    auto out = y.Row(r);
    for (int32_t c = 0; c < cols; ++c) out[c] = in[c] - log_z;
  }
  return TapeOf(logits)->Record(
      "log_softmax", std::move(y), {logits},
      [rows, cols](const BackwardContext &ctx) {
        Tensor *gx = ctx.in_grads[0];
        if (!gx) return;
        for (int32_t r = 0; r < rows; ++r) {
          auto y = ctx.out_value.Row(r);
          auto gy = ctx.out_grad.Row(r);
          double total = 0.0;
          for (int32_t c = 0; c < cols; ++c) total += gy[c];
          auto g = gx->Row(r);
          for (int32_t c = 0; c < cols; ++c) {
            g[c] += gy[c] - std::exp(y[c]) * static_cast<float>(total);
          }
        }
      });
}

Var LayerNorm(Var x, Var gain, Var bias, float eps) {
  const Tensor &in = x.Value();
  if (eps <= 0.0f) TSRNNT_ERR << "LayerNorm: eps must be positive";
  int32_t rows, cols;
  if (in.Rank() == 1) {
    rows = 1;
    cols = in.Dim(0);
  } else {
    RequireMatrix(in, "LayerNorm");
    rows = in.NumRows();
    cols = in.NumCols();
  }
  if (gain.Value().NumElements() != cols || bias.Value().NumElements() != cols) {
    TSRNNT_ERR_CODE(ErrorCode::kShape)
        << "LayerNorm: gain/bias size does not match " << cols << " columns";
  }
  const float *g = gain.Value().Data();
  const float *b = bias.Value().Data();
  Tensor y(in.Shape());
  // Per-row normalized values and inverse std, kept for the backward pass.
  std::vector<float> xhat(in.NumElements());
  std::vector<float> inv_std(rows);
  for (int32_t r = 0; r < rows; ++r) {
    const float *row = in.Data() + static_cast<int64_t>(r) * cols;
    double mean = 0.0;
    for (int32_t c = 0; c < cols; ++c) mean += row[c];
    mean /= cols;
    double var = 0.0;
    for (int32_t c = 0; c < cols; ++c) {
      double d = row[c] - mean;
      var += d * d;
    }
    var /= cols;
    double is = 1.0 / std::sqrt(var + eps);
    inv_std[r] = static_cast<float>(is);
    float *out = y.Data() + static_cast<int64_t>(r) * cols;
    float *xh = xhat.data() + static_cast<int64_t>(r) * cols;
    for (int32_t c = 0; c < cols; ++c) {
      xh[c] = static_cast<float>((row[c] - mean) * is);
      out[c] = g[c] * xh[c] + b[c];
    }
  }
  return TapeOf(x)->Record(
      "layer_norm", std::move(y), {x, gain, bias},
      [rows, cols, xhat = std::move(xhat),
       inv_std = std::move(inv_std)](const BackwardContext &ctx) {
        const float *g = ctx.in_values[1]->Data();
        const float *gy = ctx.out_grad.Data();
        Tensor *gx = ctx.in_grads[0];
        Tensor *gg = ctx.in_grads[1];
        Tensor *gb = ctx.in_grads[2];
        for (int32_t r = 0; r < rows; ++r) {
          const float *dy = gy + static_cast<int64_t>(r) * cols;
          const float *xh = xhat.data() + static_cast<int64_t>(r) * cols;
          if (gg) {
            for (int32_t c = 0; c < cols; ++c) (*gg)[c] += dy[c] * xh[c];
          }
          if (gb) {
            for (int32_t c = 0; c < cols; ++c) (*gb)[c] += dy[c];
          }
          if (gx) {
            double mean_d = 0.0, mean_dx = 0.0;
            for (int32_t c = 0; c < cols; ++c) {
              double d = static_cast<double>(dy[c]) * g[c];
              mean_d += d;
              mean_dx += d * xh[c];
            }
            mean_d /= cols;
            mean_dx /= cols;
            float *out = gx->Data() + static_cast<int64_t>(r) * cols;
            for (int32_t c = 0; c < cols; ++c) {
              double d = static_cast<double>(dy[c]) * g[c];
              out[c] += static_cast<float>(inv_std[r] *
                                           (d - mean_d - xh[c] * mean_dx));
            }
          }
        }
      });
}

Var DepthwiseConv1d(Var x, Var kernel, bool causal) {
  const Tensor &in = x.Value();
  const Tensor &w = kernel.Value();
  RequireMatrix(in, "DepthwiseConv1d");
  RequireMatrix(w, "DepthwiseConv1d");
  int32_t frames = in.NumRows(), dim = in.NumCols(), taps = w.NumRows();
  if (frames == 0) TSRNNT_ERR_CODE(ErrorCode::kShape) << "DepthwiseConv1d: empty sequence";
  if (w.NumCols() != dim) {
    TSRNNT_ERR_CODE(ErrorCode::kShape)
        << "DepthwiseConv1d: kernel " << w.ShapeString() << " vs input "
        << in.ShapeString();
  }
  if (!causal && taps % 2 == 0) {
    TSRNNT_ERR_CODE(ErrorCode::kShape)
        << "DepthwiseConv1d: non-causal kernel size must be odd";
  }
  // Input frame read by tap j for output t is t + j - offset.
  int32_t offset = causal ? taps - 1 : (taps - 1) / 2;
  Tensor y = Tensor::Matrix(frames, dim);
  for (int32_t t = 0; t < frames; ++t) {
    float *out = y.Row(t).data();
    for (int32_t j = 0; j < taps; ++j) {
      int32_t s = t + j - offset;
      if (s < 0 || s >= frames) continue;
      const float *src = in.Row(s).data();
      const float *wj = w.Row(j).data();
      for (int32_t d = 0; d < dim; ++d) out[d] += wj[d] * src[d];
    }
  }
  return TapeOf(x)->Record(
      "depthwise_conv1d", std::move(y), {x, kernel},
      [frames, dim, taps, offset](const BackwardContext &ctx) {
        const Tensor &in = *ctx.in_values[0];
        const Tensor &w = *ctx.in_values[1];
        Tensor *gx = ctx.in_grads[0];
        Tensor *gw = ctx.in_grads[1];
        for (int32_t t = 0; t < frames; ++t) {
          const float *gy = ctx.out_grad.Row(t).data();
          for (int32_t j = 0; j < taps; ++j) {
            int32_t s = t + j - offset;
            if (s < 0 || s >= frames) continue;
            if (gx) {
              float *g = gx->Row(s).data();
              const float *wj = w.Row(j).data();
              for (int32_t d = 0; d < dim; ++d) g[d] += wj[d] * gy[d];
            }
            if (gw) {
              float *g = gw->Row(j).data();
              const float *src = in.Row(s).data();
              for (int32_t d = 0; d < dim; ++d) g[d] += src[d] * gy[d];
            }
          }
        }
      });
}

Var Conv2d(Var x, Var weight, Var bias, int32_t in_channels, int32_t freq) {
  const Tensor &in = x.Value();
  const Tensor &w = weight.Value();
  RequireMatrix(in, "Conv2d");
  RequireMatrix(w, "Conv2d");
  int32_t rows = in.NumRows();
  if (in.NumCols() != in_channels * freq) {
    TSRNNT_ERR_CODE(ErrorCode::kShape)
        << "Conv2d: input " << in.ShapeString() << " is not "
        << in_channels << " channels x " << freq << " bins";
  }
  int32_t out_channels = w.NumRows();
  if (w.NumCols() != in_channels * 9 ||
      bias.Value().NumElements() != out_channels) {
    TSRNNT_ERR_CODE(ErrorCode::kShape)
        << "Conv2d: weight " << w.ShapeString() << " / bias "
        << bias.Value().ShapeString() << " do not match " << in_channels
        << " input channels";
  }
  if (rows < 3) {
    TSRNNT_ERR_CODE(ErrorCode::kShape)
        << "Conv2d: needs at least 3 input frames, got " << rows;
  }
  int32_t out_rows = rows - 2;
  const float *b = bias.Value().Data();
  Tensor y = Tensor::Matrix(out_rows, out_channels * freq);
  for (int32_t t = 0; t < out_rows; ++t) {
    for (int32_t co = 0; co < out_channels; ++co) {
      float *out = y.Row(t).data() + co * freq;
      std::fill(out, out + freq, b[co]);
      const float *wco = w.Row(co).data();
      for (int32_t ci = 0; ci < in_channels; ++ci) {
        for (int32_t dt = 0; dt < 3; ++dt) {
          const float *src = in.Row(t + dt).data() + ci * freq;
          const float *wk = wco + (ci * 3 + dt) * 3;
          // df = 0 reads f-1, df = 1 reads f, df = 2 reads f+1.
          for (int32_t f = 1; f < freq; ++f) out[f] += wk[0] * src[f - 1];
          for (int32_t f = 0; f < freq; ++f) out[f] += wk[1] * src[f];
          for (int32_t f = 0; f + 1 < freq; ++f) out[f] += wk[2] * src[f + 1];
        }
      }
    }
  }
  return TapeOf(x)->Record(
      "conv2d", std::move(y), {x, weight, bias},
      [out_rows, out_channels, in_channels, freq](const BackwardContext &ctx) {
        const Tensor &in = *ctx.in_values[0];
        const Tensor &w = *ctx.in_values[1];
        Tensor *gx = ctx.in_grads[0];
        Tensor *gw = ctx.in_grads[1];
        Tensor *gb = ctx.in_grads[2];
        for (int32_t t = 0; t < out_rows; ++t) {
          for (int32_t co = 0; co < out_channels; ++co) {
            const float *gy = ctx.out_grad.Row(t).data() + co * freq;
            if (gb) {
              float s = 0.0f;
              for (int32_t f = 0; f < freq; ++f) s += gy[f];
              (*gb)[co] += s;
            }
            const float *wco = w.Row(co).data();
            float *gwco = gw ? gw->Row(co).data() : nullptr;
            for (int32_t ci = 0; ci < in_channels; ++ci) {
              for (int32_t dt = 0; dt < 3; ++dt) {
                const float *src = in.Row(t + dt).data() + ci * freq;
                const float *wk = wco + (ci * 3 + dt) * 3;
                if (gx) {
                  float *g = gx->Row(t + dt).data() + ci * freq;
                  for (int32_t f = 1; f < freq; ++f) g[f - 1] += wk[0] * gy[f];
                  for (int32_t f = 0; f < freq; ++f) g[f] += wk[1] * gy[f];
                  for (int32_t f = 0; f + 1 < freq; ++f) g[f + 1] += wk[2] * gy[f];
                }
                if (gwco) {
                  float *gk = gwco + (ci * 3 + dt) * 3;
                  float s0 = 0.0f, s1 = 0.0f, s2 = 0.0f;
                  for (int32_t f = 1; f < freq; ++f) s0 += src[f - 1] * gy[f];
                  for (int32_t f = 0; f < freq; ++f) s1 += src[f] * gy[f];
                  for (int32_t f = 0; f + 1 < freq; ++f) s2 += src[f + 1] * gy[f];
                  gk[0] += s0;
                  gk[1] += s1;
                  gk[2] += s2;
                }
              }
            }
          }
        }
      });
}

Var MaxPool2d(Var x, int32_t channels, int32_t freq) {
  const Tensor &in = x.Value();
  RequireMatrix(in, "MaxPool2d");
  if (in.NumCols() != channels * freq) {
    TSRNNT_ERR_CODE(ErrorCode::kShape)
        << "MaxPool2d: input " << in.ShapeString() << " is not " << channels
        << " channels x " << freq << " bins";
  }
  int32_t out_rows = in.NumRows() / 2;
  int32_t out_freq = freq / 2;
  int32_t out_cols = channels * out_freq;
  Tensor y = Tensor::Matrix(out_rows, out_cols);
  // Flat input index of the winning cell for each output cell.
  std::vector<int64_t> argmax(static_cast<size_t>(out_rows) * out_cols);
  int32_t in_cols = in.NumCols();
  for (int32_t t = 0; t < out_rows; ++t) {
    for (int32_t c = 0; c < channels; ++c) {
      for (int32_t f = 0; f < out_freq; ++f) {
        int64_t best = static_cast<int64_t>(2 * t) * in_cols + c * freq + 2 * f;
        float best_v = in[best];
        for (int32_t a = 0; a < 2; ++a) {
          for (int32_t b = 0; b < 2; ++b) {
            int64_t idx =
                static_cast<int64_t>(2 * t + a) * in_cols + c * freq + 2 * f + b;
            if (in[idx] > best_v) {
              best_v = in[idx];
              best = idx;
            }
          }
        }
        int64_t o = static_cast<int64_t>(t) * out_cols + c * out_freq + f;
        y[o] = best_v;
        argmax[o] = best;
      }
    }
  }
  return TapeOf(x)->Record("max_pool2d", std::move(y), {x},
                           [argmax = std::move(argmax)](const BackwardContext &ctx) {
                             Tensor *gx = ctx.in_grads[0];
                             if (!gx) return;
                             for (size_t o = 0; o < argmax.size(); ++o) {
                               (*gx)[argmax[o]] += ctx.out_grad[o];
                             }
                           });
}

Var AvgPool2d(Var x, int32_t channels, int32_t freq) {
  const Tensor &in = x.Value();
  RequireMatrix(in, "AvgPool2d");
  if (in.NumCols() != channels * freq) {
    TSRNNT_ERR_CODE(ErrorCode::kShape)
        << "AvgPool2d: input " << in.ShapeString() << " is not " << channels
        << " channels x " << freq << " bins";
  }
  int32_t out_rows = in.NumRows() / 2;
  int32_t out_freq = freq / 2;
  int32_t out_cols = channels * out_freq;
  int32_t in_cols = in.NumCols();
  Tensor y = Tensor::Matrix(out_rows, out_cols);
  auto cell = [=](int32_t t, int32_t c, int32_t f, int32_t a, int32_t b) {
    return static_cast<int64_t>(2 * t + a) * in_cols + c * freq + 2 * f + b;
  };
  for (int32_t t = 0; t < out_rows; ++t) {
    for (int32_t c = 0; c < channels; ++c) {
      for (int32_t f = 0; f < out_freq; ++f) {
        float s = in[cell(t, c, f, 0, 0)] + in[cell(t, c, f, 0, 1)];
        s += in[cell(t, c, f, 1, 0)] + in[cell(t, c, f, 1, 1)];
        y(t, c * out_freq + f) = 0.25f * s;
      }
    }
  }
  return TapeOf(x)->Record(
      "avg_pool2d", std::move(y), {x}, [=](const BackwardContext &ctx) {
        Tensor *gx = ctx.in_grads[0];
        if (!gx) return;
        for (int32_t t = 0; t < out_rows; ++t) {
          for (int32_t c = 0; c < channels; ++c) {
            for (int32_t f = 0; f < out_freq; ++f) {
              float g = 0.25f * ctx.out_grad(t, c * out_freq + f);
              for (int32_t a = 0; a < 2; ++a) {
                for (int32_t b = 0; b < 2; ++b) (*gx)[cell(t, c, f, a, b)] += g;
              }
            }
          }
        }
      });
}

Var EmbeddingLookup(Var table, std::span<const int32_t> ids) {
  const Tensor &tab = table.Value();
  RequireMatrix(tab, "EmbeddingLookup");
  int32_t vocab = tab.NumRows(), dim = tab.NumCols();
  std::vector<int32_t> rows(ids.begin(), ids.end());
  Tensor y = Tensor::Matrix(static_cast<int32_t>(rows.size()), dim);
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] < 0 || rows[i] >= vocab) {
      TSRNNT_ERR_CODE(ErrorCode::kShape)
          << "EmbeddingLookup: id " << rows[i] << " outside [0, " << vocab
          << ")";
    }
    auto src = tab.Row(rows[i]);
    std::copy(src.begin(), src.end(), y.Row(static_cast<int32_t>(i)).begin());
  }
  return TapeOf(table)->Record(
      "embedding_lookup", std::move(y), {table},
      [rows = std::move(rows), dim](const BackwardContext &ctx) {
        Tensor *g = ctx.in_grads[0];
        if (!g) return;
        for (size_t i = 0; i < rows.size(); ++i) {
          const float *src = ctx.out_grad.Row(static_cast<int32_t>(i)).data();
          float *dst = g->Row(rows[i]).data();
          for (int32_t d = 0; d < dim; ++d) dst[d] += src[d];
        }
      });
}

Var Concat(std::span<const Var> parts, int32_t axis) {
  if (parts.empty()) TSRNNT_ERR << "Concat of nothing";
  if (axis != 0 && axis != 1) TSRNNT_ERR << "Concat axis must be 0 or 1";
  std::vector<int32_t> sizes;
  int32_t fixed = -1, total = 0;
  for (const Var &p : parts) {
    const Tensor &t = p.Value();
    RequireMatrix(t, "Concat");
    int32_t along = axis == 0 ? t.NumRows() : t.NumCols();
    int32_t other = axis == 0 ? t.NumCols() : t.NumRows();
    if (fixed >= 0 && other != fixed) {
      TSRNNT_ERR_CODE(ErrorCode::kShape)
          << "Concat: mismatched part " << t.ShapeString();
    }
    fixed = other;
    sizes.push_back(along);
    total += along;
  }
  Tensor y = axis == 0 ? Tensor::Matrix(total, fixed) : Tensor::Matrix(fixed, total);
  int32_t start = 0;
  for (size_t i = 0; i < parts.size(); ++i) {
    const Tensor &t = parts[i].Value();
    if (axis == 0) {
      std::copy(t.Values().begin(), t.Values().end(),
                y.Data() + static_cast<int64_t>(start) * fixed);
    } else {
      for (int32_t r = 0; r < fixed; ++r) {
        auto src = t.Row(r);
        std::copy(src.begin(), src.end(), y.Row(r).begin() + start);
      }
    }
    start += sizes[i];
  }
  std::vector<Var> inputs(parts.begin(), parts.end());
  return TapeOf(parts[0])->Record(
      "concat", std::move(y), std::move(inputs),
      [sizes, axis, fixed](const BackwardContext &ctx) {
        int32_t start = 0;
        for (size_t i = 0; i < sizes.size(); ++i) {
          if (Tensor *g = ctx.in_grads[i]) {
            if (axis == 0) {
              const float *src =
                  ctx.out_grad.Data() + static_cast<int64_t>(start) * fixed;
              for (int64_t j = 0; j < g->NumElements(); ++j) (*g)[j] += src[j];
            } else {
              for (int32_t r = 0; r < fixed; ++r) {
                auto src = ctx.out_grad.Row(r);
                auto dst = g->Row(r);
                for (int32_t c = 0; c < sizes[i]; ++c) dst[c] += src[start + c];
              }
            }
          }
          start += sizes[i];
        }
      });
}

Var SliceRows(Var a, int32_t begin, int32_t end) {
  const Tensor &x = a.Value();
  RequireMatrix(x, "SliceRows");
  if (begin < 0 || end > x.NumRows() || begin > end) {
    TSRNNT_ERR_CODE(ErrorCode::kShape)
        << "SliceRows [" << begin << ", " << end << ") of " << x.ShapeString();
  }
  int32_t cols = x.NumCols();
  Tensor y = Tensor::Matrix(end - begin, cols);
  std::copy(x.Data() + static_cast<int64_t>(begin) * cols,
            x.Data() + static_cast<int64_t>(end) * cols, y.Data());
  return TapeOf(a)->Record("slice_rows", std::move(y), {a},
                           [begin, cols](const BackwardContext &ctx) {
                             Tensor *g = ctx.in_grads[0];
                             if (!g) return;
                             float *dst = g->Data() + static_cast<int64_t>(begin) * cols;
                             for (int64_t i = 0; i < ctx.out_grad.NumElements(); ++i) {
                               dst[i] += ctx.out_grad[i];
                             }
                           });
}

Var SliceCols(Var a, int32_t begin, int32_t end) {
  const Tensor &x = a.Value();
  RequireMatrix(x, "SliceCols");
  if (begin < 0 || end > x.NumCols() || begin > end) {
    TSRNNT_ERR_CODE(ErrorCode::kShape)
        << "SliceCols [" << begin << ", " << end << ") of " << x.ShapeString();
  }
  int32_t rows = x.NumRows(), width = end - begin;
  Tensor y = Tensor::Matrix(rows, width);
  for (int32_t r = 0; r < rows; ++r) {
    auto src = x.Row(r);
    std::copy(src.begin() + begin, src.begin() + end, y.Row(r).begin());
  }
  return TapeOf(a)->Record("slice_cols", std::move(y), {a},
                           [rows, begin, width](const BackwardContext &ctx) {
                             Tensor *g = ctx.in_grads[0];
                             if (!g) return;
                             for (int32_t r = 0; r < rows; ++r) {
                               auto src = ctx.out_grad.Row(r);
                               auto dst = g->Row(r);
                               for (int32_t c = 0; c < width; ++c) {
                                 dst[begin + c] += src[c];
                               }
                             }
                           });
}

Var MeanOverTime(Var a) {
  const Tensor &x = a.Value();
  RequireMatrix(x, "MeanOverTime");
  int32_t rows = x.NumRows(), cols = x.NumCols();
  if (rows == 0) TSRNNT_ERR_CODE(ErrorCode::kShape) << "MeanOverTime of an empty sequence";
  std::vector<double> acc(cols, 0.0);
  for (int32_t r = 0; r < rows; ++r) {
    auto row = x.Row(r);
    for (int32_t c = 0; c < cols; ++c) acc[c] += row[c];
  }
  Tensor y = Tensor::Matrix(1, cols);
  for (int32_t c = 0; c < cols; ++c) y[c] = static_cast<float>(acc[c] / rows);
  return TapeOf(a)->Record("mean_over_time", std::move(y), {a},
                           [rows, cols](const BackwardContext &ctx) {
                             Tensor *g = ctx.in_grads[0];
                             if (!g) return;
                             float inv = 1.0f / rows;
                             for (int32_t r = 0; r < rows; ++r) {
                               auto dst = g->Row(r);
                               for (int32_t c = 0; c < cols; ++c) {
                                 dst[c] += ctx.out_grad[c] * inv;
                               }
                             }
                           });
}

Var Sum(Var a) {
  const Tensor &x = a.Value();
  double s = 0.0;
  for (float v : x.Values()) s += v;
  return TapeOf(a)->Record("sum", Tensor::Scalar(static_cast<float>(s)), {a},
                           [](const BackwardContext &ctx) {
                             Tensor *g = ctx.in_grads[0];
                             if (!g) return;
                             float gy = ctx.out_grad[0];
                             for (float &v : g->Values()) v += gy;
                           });
}

}  // namespace tsrnnt
