// base/parallel.cc
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

#include "base/parallel.h"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "base/error.h"

namespace tsrnnt {

int32_t NumThreadsFromEnv() {
  const char *v = std::getenv("TSRNNT_NUM_THREADS");
  if (v == nullptr || *v == '\0') return 1;
  char *end = nullptr;
  long n = std::strtol(v, &end, 10);
  if (*end != '\0' || n < 1 || n > 1024) {
    TSRNNT_ERR_CODE(ErrorCode::kUsage) << "TSRNNT_NUM_THREADS must be a positive integer, got '"
                                       << v << "'";
  }
  return static_cast<int32_t>(n);
}

void ParallelFor(int64_t n, int32_t threads, const std::function<void(int64_t)> &fn) {
  if (n <= 0) return;
  threads = static_cast<int32_t>(std::min<int64_t>(std::max(threads, 1), n));
  if (threads == 1) {
    for (int64_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int64_t> next{0};
  std::exception_ptr error;
  std::mutex mu;
  auto worker = [&]() {
    for (int64_t i; (i = next.fetch_add(1)) < n;) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!error) error = std::current_exception();
        next = n;
      }
    }
  };
  std::vector<std::thread> pool;
  for (int32_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto &th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace tsrnnt
