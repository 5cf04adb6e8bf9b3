// numerics/grad-check.cc
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

#include "numerics/grad-check.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "base/error.h"
#include "numerics/rng.h"

namespace tsrnnt {

namespace {

std::vector<int64_t> PickCoordinates(int64_t n, const GradCheckOptions &opts) {
  std::vector<int64_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  if (opts.max_coordinates > 0 && opts.max_coordinates < n) {
    Rng rng(opts.seed);
    for (int64_t i = 0; i < opts.max_coordinates; ++i) {
      int64_t j = i + static_cast<int64_t>(rng.UniformInt(n - i));
      std::swap(idx[i], idx[j]);
    }
    idx.resize(opts.max_coordinates);
  }
  return idx;
}

double ScalarOf(Var v) {
  const Tensor &t = v.Value();
  if (t.NumElements() != 1) {
    TSRNNT_ERR_CODE(ErrorCode::kShape)
        << "grad check needs a scalar function, got " << t.ShapeString();
  }
  double value = t[0];
  if (!std::isfinite(value)) {
    TSRNNT_ERR_CODE(ErrorCode::kNonFinite) << "grad check: f(x) is not finite";
  }
  return value;
}

double RelativeError(double analytic, double numeric) {
  return std::fabs(analytic - numeric) / std::max(1.0, std::fabs(analytic));
}

}  // namespace

double GradCheck(const ScalarFunction &f, const Tensor &x,
                 const GradCheckOptions &opts) {
  Tensor analytic;
  {
    Tape tape;
    Var in = tape.Leaf(x);
    Var out = f(tape, in);
    ScalarOf(out);
    analytic = tape.Backward(out).Of(in);
  }
  auto eval = [&](const Tensor &point) {
    Tape tape(false);
    return ScalarOf(f(tape, tape.Constant(point)));
  };
  double worst = 0.0;
  Tensor probe = x;
  for (int64_t i : PickCoordinates(x.NumElements(), opts)) {
    float orig = probe[i];
    probe[i] = static_cast<float>(orig + opts.eps);
    double up = eval(probe);
    probe[i] = static_cast<float>(orig - opts.eps);
    double down = eval(probe);
    probe[i] = orig;
    // Divide by the step actually taken after rounding to float.
    double step = static_cast<double>(static_cast<float>(orig + opts.eps)) -
                  static_cast<double>(static_cast<float>(orig - opts.eps));
    worst = std::max(worst, RelativeError(analytic[i], (up - down) / step));
  }
  return worst;
}

double GradCheckParam(const std::function<Var(Tape &tape)> &loss,
                      Tensor *param, const GradCheckOptions &opts) {
  Tensor analytic(param->Shape());
  {
    Tape tape;
    Var out = loss(tape);
    ScalarOf(out);
    Gradients grads = tape.Backward(out);
    if (const Tensor *g = grads.OfParam(*param)) analytic = *g;
  }
  auto eval = [&]() {
    Tape tape(false);
    return ScalarOf(loss(tape));
  };
  double worst = 0.0;
  for (int64_t i : PickCoordinates(param->NumElements(), opts)) {
    float orig = (*param)[i];
    float hi = static_cast<float>(orig + opts.eps);
    float lo = static_cast<float>(orig - opts.eps);
    (*param)[i] = hi;
    double up = eval();
    (*param)[i] = lo;
    double down = eval();
    (*param)[i] = orig;
    double numeric = (up - down) / (static_cast<double>(hi) - lo);
    worst = std::max(worst, RelativeError(analytic[i], numeric));
  }
  return worst;
}

}  // namespace tsrnnt
