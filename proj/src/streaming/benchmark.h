// streaming/benchmark.h
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

#ifndef TSRNNT_STREAMING_BENCHMARK_H_
#define TSRNNT_STREAMING_BENCHMARK_H_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"
#include "streaming/session.h"

namespace tsrnnt {

struct EquivalenceResult {
  double max_abs_dev = 0.0;  // over encoder outputs
  bool tokens_equal = false;
  int32_t num_frames = 0;
  std::vector<int32_t> offline_tokens;
  std::vector<int32_t> streaming_tokens;
};

// Called after every push; lets tests tamper with a live session.
using SessionHook = std::function<void(Session *session, int32_t push_index)>;

// Decodes `wave` twice: one masked full-utterance forward pass, and a
// session fed `push_samples` at a time. Compares encoder outputs and
// transcripts.
EquivalenceResult StreamingEquivalenceCheck(const Model &model, const Waveform &wave,
                                            const Tensor *embedding, const MaskRegime &regime,
                                            const SearchOptions &opts,
                                            int64_t push_samples = 1600,
                                            const SessionHook &hook = {});

struct RtfReport {
  std::string label;
  std::string regime;
  double decode_s = 0.0;  // feature + encoder + search
  double audio_s = 0.0;
  double rtf = 0.0;
  double feature_s = 0.0;
  double encoder_s = 0.0;
  double search_s = 0.0;
  double embed_s = 0.0;  // speaker encoder, excluded from decode_s
  double avg_latency_ms = 0.0;  // chunk / 2 + look-ahead
  int32_t lookback_frames = 0;   // feature frames, -1 unbounded
  int32_t lookahead_frames = 0;  // feature frames
  // Audio pushed when a frame left the encoder minus the frame's end time,
  // over frames emitted before finalize.
  double measured_latency_mean_ms = 0.0;
  double measured_latency_p90_ms = 0.0;
  std::vector<UttTiming> per_utt;

  nlohmann::ordered_json ToJson() const;
};

// Aggregates per-utterance timings; throws when no audio was decoded.
RtfReport MakeRtfReport(const std::string &label, const MaskRegime &regime,
                        const std::vector<UttTiming> &utts,
                        const std::vector<FrameStamp> &stamps);

struct BenchmarkItem {
  std::string id;
  Waveform audio;
  Waveform enrollment;  // used by target-speaker models only
};

struct PairedRtfReport {
  RtfReport a;
  RtfReport b;
  double ratio = 0.0;  // b.decode_s / a.decode_s

  nlohmann::ordered_json ToJson() const;
  std::string ToText() const;
};

struct BenchmarkOptions {
  SearchOptions search;
  int64_t push_samples = 1600;  // 100 ms
  int32_t warmup_utts = 1;  // decoded by both models, left out of the totals
  int32_t repeats = 1;
};

// Streams every item through both models, alternating which goes first.
// Speaker embeddings are timed separately and excluded from decode time.
// Throws unless the two models share everything but the fusion setting.
PairedRtfReport RtfBenchmark(const Model &a, const std::string &label_a, const Model &b,
                             const std::string &label_b, const std::vector<BenchmarkItem> &items,
                             const MaskRegime &regime, const BenchmarkOptions &opts = {});

// One utterance through a fresh session.
SessionResult StreamUtterance(const Model &model, const Tensor *embedding,
                              const MaskRegime &regime, const Waveform &wave,
                              const SearchOptions &opts, int64_t push_samples,
                              const SessionHook &hook = {});

}  // namespace tsrnnt

#endif  // TSRNNT_STREAMING_BENCHMARK_H_
