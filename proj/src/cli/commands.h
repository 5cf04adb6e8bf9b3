// cli/commands.h
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

#ifndef TSRNNT_CLI_COMMANDS_H_
#define TSRNNT_CLI_COMMANDS_H_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "base/key-value.h"
#include "cli/decode.h"
#include "simulate/recipe.h"
#include "streaming/benchmark.h"

namespace tsrnnt {

// "0,5,10" -> {0, 5, 10}. Throws kUsage on junk.
std::vector<double> ParseDoubleList(const std::string &text);
std::vector<std::string> SplitList(const std::string &text, char sep = ',');

// Keys mirror the SimulationConfig fields; corpus fields take a "corpus."
// prefix, eval_snr_grid is a comma list. Unknown keys are rejected.
SimulationConfig SimulationConfigFromKeyValues(const KeyValues &kv);

// Counts laid out like the data generation table: one row per set.
std::string SimulationSummary(const SimulatedSets &sets, const SimulationConfig &config);

// Throws kUsage if out_dir exists, is non-empty and force is false.
SimulatedSets RunSimulate(const SimulationConfig &config, const std::string &out_dir,
                          bool force, std::ostream &out);

// Search flags shared by decode, stream-decode and benchmark.
SearchOptions MakeSearchOptions(const std::string &kind, int32_t beam);

struct DecodeArgs {
  std::string checkpoint;
  std::vector<std::string> manifests;
  DecodeOptions opts;
  std::vector<std::string> fusion_sweep;  // non-empty: sweep instead of one decode
  std::string json_out;  // empty: JSON goes to `out` after the table
  std::string hyp_out;   // "<id>\t<tokens>" lines
};

void RunDecode(const DecodeArgs &args, std::ostream &out);

struct StreamDecodeArgs {
  std::string checkpoint;
  std::string manifest;
  std::string regime;  // empty: the checkpoint's regime
  SearchOptions search;
  double push_ms = 100.0;
  bool check = false;  // compare against the full-utterance forward
  int32_t max_utts = 0;
  std::string hyp_out;
};

// Prints one line per utterance with the partial results as they grow.
// With `check`, throws kData when any utterance deviates.
void RunStreamDecode(const StreamDecodeArgs &args, std::ostream &out);

struct BenchmarkArgs {
  std::string ts_checkpoint;
  std::string vanilla_checkpoint;
  std::string manifest;
  std::string regime;
  BenchmarkOptions opts;
  int32_t max_utts = 0;
  std::string json_out;
};

PairedRtfReport RunBenchmark(const BenchmarkArgs &args, std::ostream &out);

std::map<std::string, std::vector<int32_t>> ReadHypotheses(const std::string &path);
void WriteHypotheses(const CerReport &report, const std::string &path);

// Scores a hypothesis file against a manifest. Missing ids are an error.
CerReport EvalCer(const std::string &manifest, const std::string &hyp_path);

struct OracleTestReport {
  int32_t loss_trials = 0;
  double max_loss_dev = 0.0;     // |DP - alignment sum|
  double max_grad_rel_err = 0.0;  // vs central differences
  int32_t search_trials = 0;
  int32_t search_agree = 0;     // ALSD top-1 == exhaustive top-1
  bool Passed(double loss_tol, double grad_tol) const;
  std::string ToText() const;
};

OracleTestReport RunOracleTests(int32_t trials, uint64_t seed);

struct GradCheckReport {
  std::vector<double> worst_per_input;
  double worst = 0.0;
  std::string worst_param;
  std::string ToText() const;
};

// Finite-difference check of the full target-speaker graph at toy size on
// `inputs` random (feats, enrollment, labels) draws.
GradCheckReport RunModelGradCheck(int32_t inputs, uint64_t seed, int32_t coords_per_param,
                                  double eps);

}  // namespace tsrnnt

#endif  // TSRNNT_CLI_COMMANDS_H_
