// cli/decode.h
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

#ifndef TSRNNT_CLI_DECODE_H_
#define TSRNNT_CLI_DECODE_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cli/dataset.h"
#include "json.hpp"
#include "streaming/session.h"

namespace tsrnnt {

enum class EnrollmentChoice { kTarget, kInterferer };

struct DecodeOptions {
  // Empty: the checkpoint's own regime.
  std::string regime;
  SearchOptions search;
  // Empty: the checkpoint's own fusion setting.
  std::string fusion;
  EnrollmentChoice enrollment = EnrollmentChoice::kTarget;
  int32_t threads = 1;
};

struct UttResult {
  std::string id;
  double snr_db = 0.0;
  std::vector<int32_t> reference;
  std::vector<int32_t> hypothesis;
  double cer = 0.0;
};

// Token error rates bucketed by SNR. A bucket's CER is the mean of its
// utterance CERs, so the overall average is the utterance-weighted mean of
// the buckets.
struct CerReport {
  std::string label;
  std::vector<UttResult> utts;
  std::map<double, std::pair<double, int32_t>> buckets;  // snr -> (sum cer, n)
  double average = 0.0;

  void Add(UttResult u);
  nlohmann::ordered_json ToJson() const;
  std::string ToText() const;
};

// A model set up for decoding: `fusion` / `regime` overrides applied and
// checked against what the checkpoint was trained with.
Model PrepareModel(const Model &trained, const std::string &fusion, const std::string &regime);

CerReport DecodeDataset(const Model &model, const Dataset &data, const DecodeOptions &opts);

// Expands "mid" and "all" for a model with `num_blocks` blocks.
std::string ResolveFusionLayer(const std::string &spec, int32_t num_blocks);

// One CER report per fusion override, printed as rows of one table.
struct FusionSweep {
  std::vector<std::string> layers;
  std::vector<CerReport> reports;
  nlohmann::ordered_json ToJson() const;
  std::string ToText() const;
};

FusionSweep RunFusionSweep(const Model &trained, const Dataset &data,
                           const std::vector<std::string> &layers, const DecodeOptions &opts);

}  // namespace tsrnnt

#endif  // TSRNNT_CLI_DECODE_H_
