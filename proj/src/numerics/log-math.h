// numerics/log-math.h
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

#ifndef TSRNNT_NUMERICS_LOG_MATH_H_
#define TSRNNT_NUMERICS_LOG_MATH_H_

#include <cmath>
#include <limits>
#include <span>

namespace tsrnnt {

constexpr double kLogZero = -std::numeric_limits<double>::infinity();

// log(exp(a) + exp(b)) without overflow; absorbs -inf.
inline double LogAdd(double a, double b) {
  if (a < b) std::swap(a, b);
  if (b == kLogZero) return a;
  return a + std::log1p(std::exp(b - a));
}

// log(sum_i exp(v_i)) via max-shift. Throws on empty input; an all -inf input
// returns -inf.
double LogSumExp(std::span<const double> values);
float LogSumExp(std::span<const float> values);

}  // namespace tsrnnt

#endif  // TSRNNT_NUMERICS_LOG_MATH_H_
