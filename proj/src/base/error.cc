// base/error.cc
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

#include "base/error.h"

namespace tsrnnt {

const char *ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kGeneric: return "error";
    case ErrorCode::kUsage: return "usage error";
    case ErrorCode::kData: return "data error";
    case ErrorCode::kNonFinite: return "non-finite value";
    case ErrorCode::kShape: return "shape error";
    case ErrorCode::kNotACheckpoint: return "not a checkpoint";
    case ErrorCode::kVersionMismatch: return "checkpoint version mismatch";
    case ErrorCode::kShapeMismatch: return "shape mismatch";
    case ErrorCode::kTruncated: return "truncated file";
  }
  return "error";
}

ErrorStream::ErrorStream(ErrorCode code) : code_(code) {}

ErrorStream::~ErrorStream() noexcept(false) { throw Error(code_, os_.str()); }

}  // namespace tsrnnt
