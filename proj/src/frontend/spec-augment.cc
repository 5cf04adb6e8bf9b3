// frontend/spec-augment.cc
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

#include "frontend/spec-augment.h"

#include <algorithm>

#include "base/error.h"

namespace tsrnnt {

FeatureSeq SpecAugment(const FeatureSeq &feats, const SpecAugmentPolicy &policy,
                       Rng *rng) {
  if (policy.num_freq_masks < 0 || policy.num_time_masks < 0 ||
      policy.max_freq_width < 0 || policy.max_time_width < 0) {
    TSRNNT_ERR_CODE(ErrorCode::kUsage) << "SpecAugment: negative policy value";
  }
  const int32_t num_frames = feats.NumFrames(), dim = feats.Dim();
  if (policy.num_freq_masks > 0 && policy.max_freq_width >= dim) {
    TSRNNT_ERR_CODE(ErrorCode::kUsage)
        << "SpecAugment: max_freq_width " << policy.max_freq_width
        << " must be below the feature dim " << dim;
  }
  FeatureSeq out = feats;
  Tensor &m = out.frames;
  for (int32_t i = 0; i < policy.num_freq_masks; ++i) {
    int32_t width = static_cast<int32_t>(rng->UniformInt(0, policy.max_freq_width));
    int32_t start = static_cast<int32_t>(rng->UniformInt(0, dim - width));
    for (int32_t t = 0; t < num_frames; ++t) {
      for (int32_t f = start; f < start + width; ++f) m(t, f) = policy.mask_value;
    }
  }
  const int32_t max_time = std::min(policy.max_time_width, num_frames - 1);
  for (int32_t i = 0; i < policy.num_time_masks && max_time > 0; ++i) {
    int32_t width = static_cast<int32_t>(rng->UniformInt(0, max_time));
    int32_t start = static_cast<int32_t>(rng->UniformInt(0, num_frames - width));
    for (int32_t t = start; t < start + width; ++t) {
      for (int32_t f = 0; f < dim; ++f) m(t, f) = policy.mask_value;
    }
  }
  return out;
}

}  // namespace tsrnnt
