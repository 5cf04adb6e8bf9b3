// cli/dataset.h
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

#ifndef TSRNNT_CLI_DATASET_H_
#define TSRNNT_CLI_DATASET_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "frontend/feature.h"
#include "simulate/manifest.h"

namespace tsrnnt {

struct Example {
  ManifestRecord record;
  Tensor feats;  // raw log-mel of the mixture
  std::string enroll_key;  // resolved path into Dataset::enrollments
  std::string interferer_enroll_key;
};

// Log-mel features of every record of one or more manifests, computed once.
// Enrollment features are shared between records naming the same file.
struct Dataset {
  std::vector<Example> examples;
  std::map<std::string, Tensor> enrollments;

  const Tensor &Enrollment(const std::string &key) const;
  int64_t NumFrames() const;
};

// `with_enrollments` also loads the target (and interferer, if present)
// enrollment of every record.
Dataset LoadDataset(const std::vector<std::string> &manifest_paths, const Fbank &fbank,
                    bool with_enrollments);

// Per-dimension mean and 1/std over every frame of `data`.
void FeatureStats(const Dataset &data, Tensor *mean, Tensor *inv_std);

}  // namespace tsrnnt

#endif  // TSRNNT_CLI_DATASET_H_
