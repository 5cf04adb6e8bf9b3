// base/parallel.h
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

#ifndef TSRNNT_BASE_PARALLEL_H_
#define TSRNNT_BASE_PARALLEL_H_

#include <cstdint>
#include <functional>

namespace tsrnnt {

// Worker count from TSRNNT_NUM_THREADS (default 1).
int32_t NumThreadsFromEnv();

// Runs fn(i) for i in [0, n) on up to `threads` workers. Results must be
// written by index so that output order never depends on scheduling. The
// first exception thrown by any fn is rethrown after all workers stop.
void ParallelFor(int64_t n, int32_t threads, const std::function<void(int64_t)> &fn);

}  // namespace tsrnnt

#endif  // TSRNNT_BASE_PARALLEL_H_
