// transducer/rnnt-loss.h
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

#ifndef TSRNNT_TRANSDUCER_RNNT_LOSS_H_
#define TSRNNT_TRANSDUCER_RNNT_LOSS_H_

#include <cstdint>
#include <span>
#include <vector>

#include "numerics/tape.h"

namespace tsrnnt {

constexpr int32_t kBlank = 0;

// The lattice is a [T*(U+1) x K] matrix of log-probabilities; row
// t*(U+1)+u holds log P(. | t, u). Labels are 1..K-1.
struct RnntLossResult {
  double loss = 0.0;  // -log P(y | x)
  std::vector<double> alpha;  // [T*(U+1)]
  std::vector<double> beta;   // [T*(U+1)]
  Tensor grad;  // dloss / dlattice, same shape as the lattice
};

struct RnntLossOptions {
  // Reject rows whose probabilities do not sum to 1 (tolerance 1e-4 in log
  // space). Finite-difference checks on raw lattices turn this off.
  bool check_normalized = true;
};

// Forward-backward in double precision. Throws for T = 0, out-of-range
// labels, a lattice of the wrong shape, or (optionally) unnormalised rows.
RnntLossResult ComputeRnntLoss(const Tensor &lattice,
                               std::span<const int32_t> labels, int32_t num_frames,
                               const RnntLossOptions &opts = {});

// Differentiable wrapper; returns a [1] scalar.
Var RnntLoss(Var lattice, std::span<const int32_t> labels, int32_t num_frames,
             const RnntLossOptions &opts = {});

}  // namespace tsrnnt

#endif  // TSRNNT_TRANSDUCER_RNNT_LOSS_H_
