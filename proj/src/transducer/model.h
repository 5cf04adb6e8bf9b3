// transducer/model.h
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

#ifndef TSRNNT_TRANSDUCER_MODEL_H_
#define TSRNNT_TRANSDUCER_MODEL_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "base/key-value.h"
#include "encoder/encoder.h"
#include "transducer/rnnt-loss.h"

namespace tsrnnt {

struct ModelConfig {
  EncoderConfig encoder;
  int32_t speaker_blocks = 1;
  int32_t vocab_size = 16;  // K; outputs are blank + K tokens
  int32_t embed_dim = 64;
  int32_t pred_hidden = 64;
  int32_t pred_dim = 64;
  int32_t joint_dim = 64;

  int32_t NumClasses() const { return vocab_size + 1; }
  bool TargetSpeaker() const { return encoder.TargetSpeaker(); }
  EncoderConfig SpeakerConfig() const {
    return SpeakerEncoderConfig(encoder, speaker_blocks);
  }
  void Check() const;

  KeyValues ToKeyValues() const;
  // Missing keys keep their defaults.
  static ModelConfig FromKeyValues(const KeyValues &kv);
};

// Recurrent state of the one-layer LSTM in the prediction network.
struct PredState {
  Tensor h;  // [1 x H]
  Tensor c;  // [1 x H]
};

// A target-speaker transducer (or a vanilla one when encoder.fusion is
// "none"). Parameter prefixes: enc. spk. pred. joint. plus the untrained
// feature normaliser feat.mean / feat.inv_std.
class Model {
 public:
  Model() = default;
  Model(const ModelConfig &config, uint64_t seed);

  const ModelConfig &Config() const { return config_; }
  ModelConfig &MutableConfig() { return config_; }
  const ParamSet &Params() const { return params_; }
  ParamSet &MutableParams() { return params_; }

  // Per-dimension mean / inverse std of training features.
  void SetFeatureStats(const Tensor &mean, const Tensor &inv_std);

  // All of the following take raw log-mel features.
  Var SpeakerEmbedding(Tape &tape, const Tensor &enroll_feats) const;
  Var EncodeFeatures(Tape &tape, const Tensor &feats, const Var *embedding) const;

  // Prediction net outputs for inputs blank, y_1 .. y_U: [(U+1) x P].
  Var Predict(Tape &tape, std::span<const int32_t> labels) const;
  // One step from `state` with previous token `y_prev` (blank = start).
  Var PredictStep(Tape &tape, int32_t y_prev, const PredState &state,
                  PredState *next) const;
  PredState InitialState() const;

  Var JointEncoderProj(Tape &tape, Var enc) const;   // [T x J]
  Var JointPredictorProj(Tape &tape, Var pred) const;  // [n x J]
  // Log-probabilities for the (enc row, pred row) pairs listed in
  // `enc_rows` / `pred_rows`: [n x K].
  Var Joint(Tape &tape, Var enc_proj, std::span<const int32_t> enc_rows,
            Var pred_proj, std::span<const int32_t> pred_rows) const;

  // Full T x (U+1) lattice.
  Var LatticeForward(Tape &tape, Var enc, std::span<const int32_t> labels) const;

  // -log P(labels | feats, enrollment). `enroll_feats` must be given iff the
  // model is target-speaker.
  Var Loss(Tape &tape, const Tensor &feats, const Tensor *enroll_feats,
           std::span<const int32_t> labels) const;

 private:
  ModelConfig config_;
  ParamSet params_;
};

}  // namespace tsrnnt

#endif  // TSRNNT_TRANSDUCER_MODEL_H_
