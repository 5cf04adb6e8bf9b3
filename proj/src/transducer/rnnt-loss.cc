// transducer/rnnt-loss.cc
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

#include "transducer/rnnt-loss.h"

#include <cmath>
#include <memory>

#include "base/error.h"
#include "numerics/log-math.h"

namespace tsrnnt {

RnntLossResult ComputeRnntLoss(const Tensor &lattice, std::span<const int32_t> labels,
                               int32_t num_frames, const RnntLossOptions &opts) {
  const int32_t T = num_frames;
  const int32_t U = static_cast<int32_t>(labels.size());
  if (T < 1) TSRNNT_ERR_CODE(ErrorCode::kData) << "RNNT loss needs at least one frame";
  if (lattice.Rank() != 2 || lattice.NumRows() != T * (U + 1)) {
    TSRNNT_ERR_CODE(ErrorCode::kShape)
        << "lattice " << lattice.ShapeString() << " does not match T=" << T << " U=" << U;
  }
  const int32_t K = lattice.NumCols();
  for (int32_t y : labels) {
    if (y <= kBlank || y >= K) {
      TSRNNT_ERR_CODE(ErrorCode::kData) << "label " << y << " outside 1.." << K - 1;
    }
  }
  if (opts.check_normalized) {
    for (int32_t r = 0; r < lattice.NumRows(); ++r) {
      double z = LogSumExp(lattice.Row(r));
      if (std::fabs(z) > 1e-4) {
        TSRNNT_ERR_CODE(ErrorCode::kData)
            << "lattice row " << r << " is not normalised (logsumexp " << z << ")";
      }
    }
  }
  auto lp = [&](int32_t t, int32_t u, int32_t k) -> double {
    return lattice(t * (U + 1) + u, k);
  };
  auto idx = [&](int32_t t, int32_t u) { return t * (U + 1) + u; };

  RnntLossResult r;
  r.alpha.assign(T * (U + 1), kLogZero);
  r.beta.assign(T * (U + 1), kLogZero);
  for (int32_t t = 0; t < T; ++t) {
    for (int32_t u = 0; u <= U; ++u) {
      if (t == 0 && u == 0) {
        r.alpha[0] = 0.0;
        continue;
      }
      double a = kLogZero;
      if (t > 0) a = r.alpha[idx(t - 1, u)] + lp(t - 1, u, kBlank);
      if (u > 0) a = LogAdd(a, r.alpha[idx(t, u - 1)] + lp(t, u - 1, labels[u - 1]));
      r.alpha[idx(t, u)] = a;
    }
  }
  for (int32_t t = T - 1; t >= 0; --t) {
    for (int32_t u = U; u >= 0; --u) {
      if (t == T - 1 && u == U) {
        r.beta[idx(t, u)] = lp(t, u, kBlank);
        continue;
      }
      double b = kLogZero;
      if (t + 1 < T) b = r.beta[idx(t + 1, u)] + lp(t, u, kBlank);
      if (u < U) b = LogAdd(b, r.beta[idx(t, u + 1)] + lp(t, u, labels[u]));
      r.beta[idx(t, u)] = b;
    }
  }
  const double log_p = r.beta[0];
  if (!std::isfinite(log_p)) {
    TSRNNT_ERR_CODE(ErrorCode::kNonFinite) << "RNNT loss: label sequence has zero probability";
  }
  r.loss = -log_p;

  // d(-log P)/d log P(k|t,u) = -exp(alpha(t,u) + log P(k|t,u) + beta(next) - log P)
  r.grad = Tensor::Matrix(lattice.NumRows(), K);
  for (int32_t t = 0; t < T; ++t) {
    for (int32_t u = 0; u <= U; ++u) {
      double a = r.alpha[idx(t, u)];
      double next_blank = (t + 1 < T) ? r.beta[idx(t + 1, u)] : (u == U ? 0.0 : kLogZero);
      if (next_blank != kLogZero) {
        r.grad(idx(t, u), kBlank) =
            static_cast<float>(-std::exp(a + lp(t, u, kBlank) + next_blank - log_p));
      }
      if (u < U) {
        r.grad(idx(t, u), labels[u]) = static_cast<float>(
            -std::exp(a + lp(t, u, labels[u]) + r.beta[idx(t, u + 1)] - log_p));
      }
    }
  }
  return r;
}

Var RnntLoss(Var lattice, std::span<const int32_t> labels, int32_t num_frames,
             const RnntLossOptions &opts) {
  RnntLossResult r = ComputeRnntLoss(lattice.Value(), labels, num_frames, opts);
  auto grad = std::make_shared<Tensor>(std::move(r.grad));
  return lattice.tape()->Record(
      "rnnt_loss", Tensor::Scalar(static_cast<float>(r.loss)), {lattice},
      [grad](const BackwardContext &ctx) {
        if (ctx.in_grads[0]) ctx.in_grads[0]->AddScaled(*grad, ctx.out_grad[0]);
      });
}

}  // namespace tsrnnt
