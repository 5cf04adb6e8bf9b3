// cli/checkpoint.h
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

#ifndef TSRNNT_CLI_CHECKPOINT_H_
#define TSRNNT_CLI_CHECKPOINT_H_

#include <cstdint>
#include <iosfwd>
#include <string>

#include "transducer/model.h"

namespace tsrnnt {

// Layout, all integers little-endian:
//   "TSRNNTCK"  u32 version  u32 len + model config text (key=value lines)
//   u64 step  u64 seed  u32 num_tensors
//   per tensor: u32 len + name, u32 rank, rank x i32 dims, float32 data
constexpr char kCheckpointMagic[8] = {'T', 'S', 'R', 'N', 'N', 'T', 'C', 'K'};
constexpr uint32_t kCheckpointVersion = 1;

struct Checkpoint {
  Model model;
  uint64_t step = 0;
  uint64_t seed = 0;
};

void SaveCheckpoint(const Checkpoint &ckpt, std::ostream &os);
void SaveCheckpoint(const Checkpoint &ckpt, const std::string &path);

// Rebuilds the model from the stored config and checks every tensor against
// it. Errors: kNotACheckpoint, kVersionMismatch, kTruncated, kShapeMismatch.
Checkpoint LoadCheckpoint(std::istream &is);
Checkpoint LoadCheckpoint(const std::string &path);

}  // namespace tsrnnt

#endif  // TSRNNT_CLI_CHECKPOINT_H_
