// cli/train.h
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

#ifndef TSRNNT_CLI_TRAIN_H_
#define TSRNNT_CLI_TRAIN_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "base/key-value.h"
#include "cli/checkpoint.h"
#include "cli/dataset.h"
#include "cli/optimizer.h"
#include "frontend/spec-augment.h"

namespace tsrnnt {

// "toy" (desk scale) or "large" (17 blocks, 512 wide).
ModelConfig ModelPreset(const std::string &name);

struct TrainConfig {
  std::vector<std::string> train_manifests;
  ModelConfig model;
  AdamOptions adam;
  LrSchedule lr;
  int64_t steps = 2000;
  int32_t epochs = 0;  // when > 0, overrides `steps`
  int32_t batch_size = 8;
  uint64_t seed = 1;
  bool spec_augment = true;
  SpecAugmentPolicy specaug;
  int32_t log_every = 50;
  int32_t checkpoint_every = 0;  // 0: only the final checkpoint
  std::string out_dir;           // empty: nothing written
  std::string init_from;         // checkpoint to start from

  void Check() const;
  // Keys: train_manifests (comma separated), model.preset, model.<key>,
  // fusion, regime, adam_beta1, adam_beta2, adam_eps, grad_clip,
  // warmup_steps, peak_lr, steps, epochs, batch_size, seed, spec_augment,
  // specaug.{freq_masks,freq_width,time_masks,time_width}, log_every,
  // checkpoint_every, out_dir, init_from. Throws on unknown keys.
  static TrainConfig FromKeyValues(const KeyValues &kv);
  KeyValues ToKeyValues() const;
};

struct TrainResult {
  Checkpoint checkpoint;
  std::vector<double> losses;  // mean loss of each step's batch
  double seconds = 0.0;
};

// Trains on pre-loaded data. Features come from `data`; enrollments are used
// iff the model is target-speaker. Log lines go to `log` when non-null.
TrainResult Train(const TrainConfig &cfg, const Dataset &data, std::ostream *log);

// Loads the manifests named in `cfg` and trains.
TrainResult Train(const TrainConfig &cfg, std::ostream *log);

}  // namespace tsrnnt

#endif  // TSRNNT_CLI_TRAIN_H_
