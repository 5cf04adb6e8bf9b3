// transducer/model.cc
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

#include "transducer/model.h"

#include <cmath>

#include "base/error.h"

namespace tsrnnt {

void ModelConfig::Check() const {
  encoder.Check();
  if (vocab_size < 1 || embed_dim < 1 || pred_hidden < 1 || pred_dim < 1 || joint_dim < 1) {
    TSRNNT_ERR_CODE(ErrorCode::kUsage) << "bad transducer dimensions";
  }
  if (TargetSpeaker() && speaker_blocks < 0) {
    TSRNNT_ERR_CODE(ErrorCode::kUsage) << "speaker_blocks must be >= 0";
  }
}

KeyValues ModelConfig::ToKeyValues() const {
  KeyValues kv;
  encoder.Write("encoder.", &kv);
  kv.Set("speaker_blocks", std::to_string(speaker_blocks));
  kv.Set("vocab_size", std::to_string(vocab_size));
  kv.Set("embed_dim", std::to_string(embed_dim));
  kv.Set("pred_hidden", std::to_string(pred_hidden));
  kv.Set("pred_dim", std::to_string(pred_dim));
  kv.Set("joint_dim", std::to_string(joint_dim));
  return kv;
}

ModelConfig ModelConfig::FromKeyValues(const KeyValues &kv) {
  ModelConfig c;
  c.encoder = EncoderConfig::Read("encoder.", kv);
  c.speaker_blocks = kv.GetInt("speaker_blocks", c.speaker_blocks);
  c.vocab_size = kv.GetInt("vocab_size", c.vocab_size);
  c.embed_dim = kv.GetInt("embed_dim", c.embed_dim);
  c.pred_hidden = kv.GetInt("pred_hidden", c.pred_hidden);
  c.pred_dim = kv.GetInt("pred_dim", c.pred_dim);
  c.joint_dim = kv.GetInt("joint_dim", c.joint_dim);
  c.Check();
  return c;
}

Model::Model(const ModelConfig &config, uint64_t seed) : config_(config) {
  config.Check();
  Rng rng(seed);
  Rng enc_rng = rng.Fork(1), spk_rng = rng.Fork(2), dec_rng = rng.Fork(3);
  InitEncoderParams(config.encoder, "enc.", &enc_rng, &params_);
  if (config.TargetSpeaker()) {
    InitSpeakerEncoderParams(config.SpeakerConfig(), "spk.", &spk_rng, &params_);
  }
  const int32_t k = config.NumClasses(), e = config.embed_dim, h = config.pred_hidden;
  const int32_t p = config.pred_dim, j = config.joint_dim, d = config.encoder.model_dim;
  params_.Add("pred.embed", Tensor::RandomNormal({k, e}, 1.0f, &dec_rng));
  params_.Add("pred.lstm.w", Tensor::RandomNormal({e + h, 4 * h}, 1.0f / std::sqrt(float(e + h)),
                                                  &dec_rng));
  Tensor bias = Tensor::Matrix(1, 4 * h);
  for (int32_t i = h; i < 2 * h; ++i) bias[i] = 1.0f;  // forget gate
  params_.Add("pred.lstm.b", std::move(bias));
  params_.Add("pred.out.w", Tensor::RandomNormal({h, p}, 1.0f / std::sqrt(float(h)), &dec_rng));
  params_.Add("pred.out.b", Tensor::Matrix(1, p));
  params_.Add("joint.enc.w", Tensor::RandomNormal({d, j}, 1.0f / std::sqrt(float(d)), &dec_rng));
  params_.Add("joint.enc.b", Tensor::Matrix(1, j));
  params_.Add("joint.pred.w", Tensor::RandomNormal({p, j}, 1.0f / std::sqrt(float(p)), &dec_rng));
  params_.Add("joint.out.w", Tensor::RandomNormal({j, k}, 1.0f / std::sqrt(float(j)), &dec_rng));
  params_.Add("joint.out.b", Tensor::Matrix(1, k));
}

void Model::SetFeatureStats(const Tensor &mean, const Tensor &inv_std) {
  if (mean.NumElements() != config_.encoder.input_dim ||
      inv_std.NumElements() != config_.encoder.input_dim) {
    TSRNNT_ERR_CODE(ErrorCode::kShape) << "feature statistics have the wrong size";
  }
  auto &m = params_.MutableMap();
  m["feat.mean"] = Tensor({config_.encoder.input_dim}, mean.Vector());
  m["feat.inv_std"] = Tensor({config_.encoder.input_dim}, inv_std.Vector());
}

Var Model::SpeakerEmbedding(Tape &tape, const Tensor &enroll_feats) const {
  if (!config_.TargetSpeaker()) {
    TSRNNT_ERR_CODE(ErrorCode::kUsage) << "vanilla model has no speaker encoder";
  }
  return SpeakerEncode(tape, params_, "spk.", config_.SpeakerConfig(),
                       NormalizeFeatures(params_, enroll_feats));
}

Var Model::EncodeFeatures(Tape &tape, const Tensor &feats, const Var *embedding) const {
  return Encode(tape, params_, "enc.", config_.encoder, NormalizeFeatures(params_, feats),
                embedding);
}

PredState Model::InitialState() const {
  return {Tensor::Matrix(1, config_.pred_hidden), Tensor::Matrix(1, config_.pred_hidden)};
}

namespace {

void LstmStep(Tape &tape, const ParamSet &ps, int32_t hidden, Var x, Var h, Var c,
              Var *h_next, Var *c_next) {
  Var xh_parts[2] = {x, h};
  Var gates = Add(MatMul(Concat(xh_parts, 1), ps(tape, "pred.lstm.w")), ps(tape, "pred.lstm.b"));
  Var i = Logistic(SliceCols(gates, 0, hidden));
  Var f = Logistic(SliceCols(gates, hidden, 2 * hidden));
  Var g = Tanh(SliceCols(gates, 2 * hidden, 3 * hidden));
  Var o = Logistic(SliceCols(gates, 3 * hidden, 4 * hidden));
  *c_next = Add(Mul(f, c), Mul(i, g));
  *h_next = Mul(o, Tanh(*c_next));
}

}  // namespace

Var Model::Predict(Tape &tape, std::span<const int32_t> labels) const {
  std::vector<int32_t> ids = {kBlank};
  for (int32_t y : labels) {
    if (y <= kBlank || y > config_.vocab_size) {
      TSRNNT_ERR_CODE(ErrorCode::kData) << "token " << y << " outside 1.." << config_.vocab_size;
    }
    ids.push_back(y);
  }
  Var emb = EmbeddingLookup(params_(tape, "pred.embed"), ids);
  Var h = tape.Constant(Tensor::Matrix(1, config_.pred_hidden));
  Var c = h;
  std::vector<Var> outs;
  for (size_t u = 0; u < ids.size(); ++u) {
    LstmStep(tape, params_, config_.pred_hidden, SliceRows(emb, u, u + 1), h, c, &h, &c);
    outs.push_back(h);
  }
  Var hs = outs.size() == 1 ? outs[0] : Concat(outs, 0);
  return Add(MatMul(hs, params_(tape, "pred.out.w")), params_(tape, "pred.out.b"));
}

Var Model::PredictStep(Tape &tape, int32_t y_prev, const PredState &state,
                       PredState *next) const {
  if (y_prev < kBlank || y_prev > config_.vocab_size) {
    TSRNNT_ERR_CODE(ErrorCode::kData) << "token " << y_prev << " outside 0.." << config_.vocab_size;
  }
  int32_t id[1] = {y_prev};
  Var x = EmbeddingLookup(params_(tape, "pred.embed"), id);
  Var h, c;
  LstmStep(tape, params_, config_.pred_hidden, x, tape.Constant(state.h), tape.Constant(state.c),
           &h, &c);
  if (next != nullptr) *next = {h.Value(), c.Value()};
  return Add(MatMul(h, params_(tape, "pred.out.w")), params_(tape, "pred.out.b"));
}

Var Model::JointEncoderProj(Tape &tape, Var enc) const {
  return Add(MatMul(enc, params_(tape, "joint.enc.w")), params_(tape, "joint.enc.b"));
}

Var Model::JointPredictorProj(Tape &tape, Var pred) const {
  return MatMul(pred, params_(tape, "joint.pred.w"));
}

Var Model::Joint(Tape &tape, Var enc_proj, std::span<const int32_t> enc_rows, Var pred_proj,
                 std::span<const int32_t> pred_rows) const {
  Var h = Tanh(Add(EmbeddingLookup(enc_proj, enc_rows), EmbeddingLookup(pred_proj, pred_rows)));
  Var logits = Add(MatMul(h, params_(tape, "joint.out.w")), params_(tape, "joint.out.b"));
  return LogSoftmax(logits);
}

Var Model::LatticeForward(Tape &tape, Var enc, std::span<const int32_t> labels) const {
  const int32_t T = enc.Value().NumRows(), U = static_cast<int32_t>(labels.size());
  Var enc_proj = JointEncoderProj(tape, enc);
  Var pred_proj = JointPredictorProj(tape, Predict(tape, labels));
  std::vector<int32_t> t_ids, u_ids;
  t_ids.reserve(T * (U + 1));
  u_ids.reserve(T * (U + 1));
  for (int32_t t = 0; t < T; ++t) {
    for (int32_t u = 0; u <= U; ++u) {
      t_ids.push_back(t);
      u_ids.push_back(u);
    }
  }
  return Joint(tape, enc_proj, t_ids, pred_proj, u_ids);
}

Var Model::Loss(Tape &tape, const Tensor &feats, const Tensor *enroll_feats,
                std::span<const int32_t> labels) const {
  Var emb;
  if (config_.TargetSpeaker()) {
    if (enroll_feats == nullptr) {
      TSRNNT_ERR_CODE(ErrorCode::kUsage) << "target-speaker model needs an enrollment";
    }
    emb = SpeakerEmbedding(tape, *enroll_feats);
  } else if (enroll_feats != nullptr) {
    TSRNNT_ERR_CODE(ErrorCode::kUsage) << "vanilla model got an enrollment";
  }
  Var enc = EncodeFeatures(tape, feats, config_.TargetSpeaker() ? &emb : nullptr);
  Var lattice = LatticeForward(tape, enc, labels);
  return RnntLoss(lattice, labels, enc.Value().NumRows());
}

}  // namespace tsrnnt
