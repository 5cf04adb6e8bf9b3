// numerics/log-math.cc
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

#include "numerics/log-math.h"

#include <algorithm>

#include "base/error.h"

namespace tsrnnt {

namespace {

template <typename Real>
double LogSumExpImpl(std::span<const Real> values) {
  if (values.empty()) TSRNNT_ERR << "LogSumExp of an empty vector";
  double m = kLogZero;
  for (Real v : values) m = std::max(m, static_cast<double>(v));
  if (m == kLogZero) return kLogZero;
  double sum = 0.0;
  for (Real v : values) sum += std::exp(static_cast<double>(v) - m);
  return m + std::log(sum);
}

}  // namespace

double LogSumExp(std::span<const double> values) {
  return LogSumExpImpl(values);
}

float LogSumExp(std::span<const float> values) {
  return static_cast<float>(LogSumExpImpl(values));
}

}  // namespace tsrnnt
