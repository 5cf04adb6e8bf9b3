// numerics/param-set.cc
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

#include "numerics/param-set.h"

#include "base/error.h"

namespace tsrnnt {

Tensor &ParamSet::Add(const std::string &name, Tensor value) {
  auto [it, inserted] = params_.emplace(name, std::move(value));
  if (!inserted) TSRNNT_ERR << "duplicate parameter " << name;
  return it->second;
}

Tensor &ParamSet::Get(const std::string &name) {
  auto it = params_.find(name);
  if (it == params_.end()) TSRNNT_ERR_CODE(ErrorCode::kData) << "missing parameter " << name;
  return it->second;
}

const Tensor &ParamSet::Get(const std::string &name) const {
  auto it = params_.find(name);
  if (it == params_.end()) TSRNNT_ERR_CODE(ErrorCode::kData) << "missing parameter " << name;
  return it->second;
}

int64_t ParamSet::NumParameters() const {
  int64_t n = 0;
  for (const auto &[name, t] : params_) n += t.NumElements();
  return n;
}

}  // namespace tsrnnt
