// numerics/grad-check.h
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

#ifndef TSRNNT_NUMERICS_GRAD_CHECK_H_
#define TSRNNT_NUMERICS_GRAD_CHECK_H_

#include <cstdint>
#include <functional>

#include "numerics/tape.h"

namespace tsrnnt {

struct GradCheckOptions {
  double eps = 1e-4;
  // Check at most this many coordinates (chosen with `seed`); 0 means all.
  int32_t max_coordinates = 0;
  uint64_t seed = 0;
};

// Builds a scalar on `tape` from the differentiable input `x`.
using ScalarFunction = std::function<Var(Tape &tape, Var x)>;

// Max over checked coordinates of
//   |analytic - central difference| / max(1, |analytic|).
// Throws when f(x) is not finite.
double GradCheck(const ScalarFunction &f, const Tensor &x,
                 const GradCheckOptions &opts = {});

// Same measure for a tensor the loss reads through Tape::Param (a model
// parameter). `param` is perturbed in place and restored before returning.
double GradCheckParam(const std::function<Var(Tape &tape)> &loss,
                      Tensor *param, const GradCheckOptions &opts = {});

}  // namespace tsrnnt

#endif  // TSRNNT_NUMERICS_GRAD_CHECK_H_
