// encoder/encoder.h
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

#ifndef TSRNNT_ENCODER_ENCODER_H_
#define TSRNNT_ENCODER_ENCODER_H_

#include <cstdint>
#include <string>
#include <vector>

#include "base/key-value.h"
#include "encoder/attention-mask.h"
#include "numerics/param-set.h"

namespace tsrnnt {

struct EncoderConfig {
  int32_t input_dim = 80;
  int32_t subsample_channels = 8;
  int32_t model_dim = 64;
  int32_t num_blocks = 2;
  int32_t num_heads = 4;
  int32_t ffn_dim = 256;
  int32_t conv_kernel = 15;
  // Blocks whose output is multiplied by the speaker embedding: "none"
  // (vanilla transducer), "all", "3", "1-5", "1,3".
  std::string fusion = "1";
  MaskRegime regime;

  // Streaming regimes use a causal depthwise convolution.
  bool CausalConv() const { return regime.Streaming(); }
  bool TargetSpeaker() const { return fusion != "none"; }
  // One flag per block. Throws ErrorCode::kUsage on a bad spec.
  std::vector<bool> FusionAfter() const;
  void Check() const;

  void Write(const std::string &prefix, KeyValues *kv) const;
  static EncoderConfig Read(const std::string &prefix, const KeyValues &kv);
};

// Adds the parameters of an encoder (subsampler + blocks) under `prefix`.
void InitEncoderParams(const EncoderConfig &cfg, const std::string &prefix,
                       Rng *rng, ParamSet *params);

// (feats - feat.mean) * feat.inv_std when those entries exist, else a copy.
Tensor NormalizeFeatures(const ParamSet &params, const Tensor &feats);

// Sinusoidal positions for frames start .. start+n-1.
Tensor SinusoidalPositions(int32_t start, int32_t n, int32_t dim);

// Two stages of 3x3 conv, Swish, 2x2 average pool, then a linear map to D and
// positional encoding. The input gets one zero frame before and after, so
// T = floor(floor(T'/2)/2). Throws when T' < 4.
Var Subsample(Tape &tape, const ParamSet &params, const std::string &prefix,
              const EncoderConfig &cfg, const Tensor &feats);

// Streaming state of one Conformer block.
struct BlockCache {
  Tensor keys;    // [n x D], frames first_key .. first_key+n-1
  Tensor values;  // [n x D]
  int32_t first_key = 0;
  Tensor conv_tail;  // last (kernel-1) GLU outputs
};

// Macaron Conformer block on new frames x (rows start .. start+n-1). With
// a null cache the rows are the whole sequence; with a cache the keys,
// values and convolution history of earlier frames come from it and it is
// updated in place (streaming regimes only).
Var ConformerBlock(Tape &tape, const ParamSet &params, const std::string &prefix,
                   const EncoderConfig &cfg, Var x, int32_t start,
                   BlockCache *cache);

// Full-sequence encoder. `feats` are normalised log-mels; `embedding` is a
// [1 x D] speaker embedding, required iff cfg.TargetSpeaker().
Var Encode(Tape &tape, const ParamSet &params, const std::string &prefix,
           const EncoderConfig &cfg, const Tensor &feats, const Var *embedding);

// Speaker encoder config derived from the ASR encoder: same dims, offline
// mask, no fusion.
EncoderConfig SpeakerEncoderConfig(const EncoderConfig &asr, int32_t num_blocks);

// Encoder blocks, then a linear layer, then the mean over time: [1 x D].
void InitSpeakerEncoderParams(const EncoderConfig &spk_cfg,
                              const std::string &prefix, Rng *rng,
                              ParamSet *params);
Var SpeakerEncode(Tape &tape, const ParamSet &params, const std::string &prefix,
                  const EncoderConfig &spk_cfg, const Tensor &enroll_feats);

// out_t = h_t * e for every row.
Var Fuse(Var h, Var embedding);

}  // namespace tsrnnt

#endif  // TSRNNT_ENCODER_ENCODER_H_
