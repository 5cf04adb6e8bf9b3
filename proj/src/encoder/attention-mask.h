// encoder/attention-mask.h
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

#ifndef TSRNNT_ENCODER_ATTENTION_MASK_H_
#define TSRNNT_ENCODER_ATTENTION_MASK_H_

#include <cstdint>
#include <string>

#include "numerics/ops.h"

namespace tsrnnt {

// Encoder frames are 40 ms (4 x 10 ms feature frames); the subsampler sees
// 3 feature frames (30 ms) past the end of each encoder frame.
constexpr double kEncoderFrameMs = 40.0;
constexpr int32_t kSubsampling = 4;
constexpr int32_t kLookaheadFeatureFrames = 3;
constexpr double kLookaheadMs = 30.0;

// Which keys a query frame may attend to.
//   Offline: everything.
//   Causal: keys in [q - left, q] (left < 0: [0, q]).
//   Chunked: keys in the query's own chunk of `chunk` frames plus the
//     ceil(left / chunk) chunks before it (left < 0: all earlier chunks).
// Chunk and left sizes are in encoder frames.
struct MaskRegime {
  enum class Kind { kOffline, kCausal, kChunked };

  Kind kind = Kind::kOffline;
  int32_t chunk = 0;
  int32_t left = -1;

  static MaskRegime Offline() { return {}; }
  static MaskRegime Causal(int32_t left = -1) { return {Kind::kCausal, 0, left}; }
  static MaskRegime Chunked(int32_t chunk, int32_t left = -1);

  bool Streaming() const { return kind != Kind::kOffline; }
  bool InfiniteLeft() const { return left < 0; }

  // "offline", "causal", "causal:left=16", "chunked:15", "chunked:600ms",
  // "chunked:15:left=16". Throws ErrorCode::kUsage on bad input.
  static MaskRegime Parse(const std::string &text);
  std::string ToString() const;

  friend bool operator==(const MaskRegime &, const MaskRegime &) = default;
};

bool AttentionAllowed(const MaskRegime &regime, int32_t query, int32_t key);

// Rows are queries q0..q0+nq-1, columns keys k0..k0+nk-1.
BoolMatrix AttentionMaskBlock(const MaskRegime &regime, int32_t q0, int32_t nq,
                              int32_t k0, int32_t nk);

// T x T mask. Throws when T < 1.
BoolMatrix BuildAttentionMask(const MaskRegime &regime, int32_t num_frames);

// Smallest key index any query >= `query` may attend to.
int32_t OldestKeyNeeded(const MaskRegime &regime, int32_t query);

// chunk_ms / 2 + 30 ms for Chunked, 30 ms for Causal; throws for Offline.
double AverageLatencyMs(const MaskRegime &regime);
// Feature frames of look-ahead beyond the current one (max over a chunk).
int32_t LookaheadFeatureFrames(const MaskRegime &regime);
// Feature frames of look-back; -1 when unbounded.
int32_t LookbackFeatureFrames(const MaskRegime &regime);

}  // namespace tsrnnt

#endif  // TSRNNT_ENCODER_ATTENTION_MASK_H_
