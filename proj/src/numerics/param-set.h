// numerics/param-set.h
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

#ifndef TSRNNT_NUMERICS_PARAM_SET_H_
#define TSRNNT_NUMERICS_PARAM_SET_H_

#include <cstdint>
#include <map>
#include <string>

#include "numerics/tape.h"

namespace tsrnnt {

// Named model parameters. Tensors keep their addresses for the lifetime of
// the set (std::map nodes), which Tape::Param relies on.
class ParamSet {
 public:
  Tensor &Add(const std::string &name, Tensor value);
  bool Has(const std::string &name) const { return params_.count(name) > 0; }
  // Throws ErrorCode::kData when missing.
  Tensor &Get(const std::string &name);
  const Tensor &Get(const std::string &name) const;

  const std::map<std::string, Tensor> &Map() const { return params_; }
  std::map<std::string, Tensor> &MutableMap() { return params_; }
  int64_t NumParameters() const;

  // Parameter node for `name` on `tape`.
  Var operator()(Tape &tape, const std::string &name) const {
    return tape.Param(Get(name));
  }

 private:
  std::map<std::string, Tensor> params_;
};

}  // namespace tsrnnt

#endif  // TSRNNT_NUMERICS_PARAM_SET_H_
