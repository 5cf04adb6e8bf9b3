// cli/optimizer.h
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

#ifndef TSRNNT_CLI_OPTIMIZER_H_
#define TSRNNT_CLI_OPTIMIZER_H_

#include <cstdint>
#include <map>
#include <string>

#include "numerics/param-set.h"

namespace tsrnnt {

// Linear warm-up to `peak` over `warmup` steps, then peak * sqrt(warmup / s).
// Steps count from 1.
struct LrSchedule {
  double peak = 1e-3;
  int64_t warmup = 200;
  double At(int64_t step) const;
};

struct AdamOptions {
  double beta1 = 0.9;
  double beta2 = 0.98;
  double eps = 1e-9;
  double grad_clip = 5.0;  // global L2 norm; <= 0 disables
};

class Adam {
 public:
  explicit Adam(const AdamOptions &opts = {}) : opts_(opts) {}

  // One update with learning rate `lr`. `grads` maps parameter names to
  // gradients; parameters without an entry are left alone. Returns the
  // gradient norm before clipping.
  double Step(ParamSet *params, const std::map<std::string, Tensor> &grads, double lr);
  int64_t NumSteps() const { return t_; }

 private:
  AdamOptions opts_;
  std::map<std::string, std::pair<Tensor, Tensor>> moments_;
  int64_t t_ = 0;
};

}  // namespace tsrnnt

#endif  // TSRNNT_CLI_OPTIMIZER_H_
