// base/error.h
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

#ifndef TSRNNT_BASE_ERROR_H_
#define TSRNNT_BASE_ERROR_H_

#include <sstream>
#include <stdexcept>
#include <string>

namespace tsrnnt {

// Error categories. The CLI maps kUsage to exit code 1 and everything else
// to exit code 2.
enum class ErrorCode {
  kGeneric = 0,
  kUsage,
  kData,
  kNonFinite,
  kShape,
  kNotACheckpoint,
  kVersionMismatch,
  kShapeMismatch,
  kTruncated,
};

const char *ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Accumulates a message and throws Error when the full expression ends.
// Used through the TSRNNT_ERR family of macros, e.g.
//   TSRNNT_ERR << "bad dim " << dim;
class ErrorStream {
 public:
  explicit ErrorStream(ErrorCode code);
  ErrorStream(const ErrorStream &) = delete;
  ErrorStream &operator=(const ErrorStream &) = delete;
  [[noreturn]] ~ErrorStream() noexcept(false);

  template <typename T>
  ErrorStream &operator<<(const T &value) {
    os_ << value;
    return *this;
  }

 private:
  ErrorCode code_;
  std::ostringstream os_;
};

}  // namespace tsrnnt

#define TSRNNT_ERR_CODE(code) \
  ::tsrnnt::ErrorStream(code)

#define TSRNNT_ERR TSRNNT_ERR_CODE(::tsrnnt::ErrorCode::kGeneric)

#define TSRNNT_CHECK(cond) \
  if (cond) {              \
  } else                   \
    TSRNNT_ERR << "Check failed: " #cond " "

#endif  // TSRNNT_BASE_ERROR_H_
