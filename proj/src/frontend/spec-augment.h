// frontend/spec-augment.h
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

#ifndef TSRNNT_FRONTEND_SPEC_AUGMENT_H_
#define TSRNNT_FRONTEND_SPEC_AUGMENT_H_

#include <cstdint>

#include "frontend/feature.h"
#include "numerics/rng.h"

namespace tsrnnt {

struct SpecAugmentPolicy {
  int32_t num_freq_masks = 2;
  int32_t max_freq_width = 10;
  int32_t num_time_masks = 2;
  int32_t max_time_width = 10;  // frames
  float mask_value = 0.0f;
};

// Each mask draws a width uniformly in [0, max] and a start uniformly among
// the valid positions. The time width is clipped to T' - 1 for short inputs;
// a frequency width >= num_mels is an error.
FeatureSeq SpecAugment(const FeatureSeq &feats, const SpecAugmentPolicy &policy,
                       Rng *rng);

}  // namespace tsrnnt

#endif  // TSRNNT_FRONTEND_SPEC_AUGMENT_H_
