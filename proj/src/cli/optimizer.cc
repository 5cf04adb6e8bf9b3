// cli/optimizer.cc
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

#include "cli/optimizer.h"

#include <cmath>

#include "base/error.h"

namespace tsrnnt {

double LrSchedule::At(int64_t step) const {
  if (step < 1) TSRNNT_ERR_CODE(ErrorCode::kUsage) << "steps count from 1";
  if (warmup < 0) TSRNNT_ERR_CODE(ErrorCode::kUsage) << "warmup_steps must be >= 0";
  if (step < warmup) return peak * static_cast<double>(step) / warmup;
  return peak * std::sqrt(static_cast<double>(std::max<int64_t>(warmup, 1)) / step);
}

double Adam::Step(ParamSet *params, const std::map<std::string, Tensor> &grads, double lr) {
  double sq = 0.0;
  for (const auto &[name, g] : grads) {
    for (float v : g.Values()) sq += double(v) * v;
  }
  const double norm = std::sqrt(sq);
  if (!std::isfinite(norm)) TSRNNT_ERR_CODE(ErrorCode::kNonFinite) << "non-finite gradient";
  const double scale = opts_.grad_clip > 0 && norm > opts_.grad_clip ? opts_.grad_clip / norm : 1.0;
  ++t_;
  const double c1 = 1.0 - std::pow(opts_.beta1, double(t_));
  const double c2 = 1.0 - std::pow(opts_.beta2, double(t_));
  for (const auto &[name, g] : grads) {
    Tensor &p = params->Get(name);
    if (!p.SameShape(g)) TSRNNT_ERR_CODE(ErrorCode::kShape) << "gradient shape for " << name;
    auto [it, fresh] = moments_.try_emplace(name);
    if (fresh) it->second = {Tensor(p.Shape()), Tensor(p.Shape())};
    Tensor &m = it->second.first, &v = it->second.second;
    for (int64_t i = 0; i < p.NumElements(); ++i) {
      double gi = g[i] * scale;
      m[i] = static_cast<float>(opts_.beta1 * m[i] + (1 - opts_.beta1) * gi);
      v[i] = static_cast<float>(opts_.beta2 * v[i] + (1 - opts_.beta2) * gi * gi);
      double update = (m[i] / c1) / (std::sqrt(v[i] / c2) + opts_.eps);
      p[i] = static_cast<float>(p[i] - lr * update);
    }
  }
  return norm;
}

}  // namespace tsrnnt
