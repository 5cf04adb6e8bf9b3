// encoder/encoder.cc
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

#include "encoder/encoder.h"

#include <cmath>
#include <sstream>

#include "base/error.h"

namespace tsrnnt {

namespace {

std::string BlockPrefix(const std::string &prefix, int32_t b) {
  return prefix + "block" + std::to_string(b) + ".";
}

void AddLinear(const std::string &name, int32_t in, int32_t out, Rng *rng,
               ParamSet *params, float gain = 1.0f) {
  params->Add(name + ".w", Tensor::RandomNormal({in, out}, gain / std::sqrt(float(in)), rng));
  params->Add(name + ".b", Tensor::Matrix(1, out));
}

void AddLayerNorm(const std::string &name, int32_t dim, ParamSet *params) {
  params->Add(name + ".g", Tensor({dim}, 1.0f));
  params->Add(name + ".b", Tensor({dim}, 0.0f));
}

Var Linear(Tape &tape, const ParamSet &params, const std::string &name, Var x) {
  return Add(MatMul(x, params(tape, name + ".w")), params(tape, name + ".b"));
}

Var Norm(Tape &tape, const ParamSet &params, const std::string &name, Var x) {
  return LayerNorm(x, params(tape, name + ".g"), params(tape, name + ".b"));
}

Var FeedForward(Tape &tape, const ParamSet &params, const std::string &name, Var x) {
  Var h = Norm(tape, params, name + ".ln", x);
  h = Swish(Linear(tape, params, name + ".l1", h));
  return Linear(tape, params, name + ".l2", h);
}

Tensor ZeroPadRows(const Tensor &x) {
  Tensor out = Tensor::Matrix(x.NumRows() + 2, x.NumCols());
  std::copy(x.Values().begin(), x.Values().end(), out.Row(1).begin());
  return out;
}

}  // namespace

std::vector<bool> EncoderConfig::FusionAfter() const {
  std::vector<bool> after(num_blocks, false);
  if (fusion == "none") return after;
  if (fusion == "all") return std::vector<bool>(num_blocks, true);
  std::stringstream ss(fusion);
  std::string item;
  auto parse = [&](const std::string &s) {
    try {
      size_t pos = 0;
      int v = std::stoi(s, &pos);
      if (pos == s.size() && v >= 1 && v <= num_blocks) return v;
    } catch (const std::exception &) {
    }
    TSRNNT_ERR_CODE(ErrorCode::kUsage)
        << "bad fusion layer '" << s << "' in '" << fusion << "' (blocks are 1.."
        << num_blocks << ")";
  };
  while (std::getline(ss, item, ',')) {
    size_t dash = item.find('-');
    if (dash == std::string::npos) {
      after[parse(item) - 1] = true;
    } else {
      int lo = parse(item.substr(0, dash)), hi = parse(item.substr(dash + 1));
      if (lo > hi) TSRNNT_ERR_CODE(ErrorCode::kUsage) << "bad fusion range " << item;
      for (int l = lo; l <= hi; ++l) after[l - 1] = true;
    }
  }
  return after;
}

void EncoderConfig::Check() const {
  if (input_dim < 4 || input_dim % 4 != 0) {
    TSRNNT_ERR_CODE(ErrorCode::kUsage) << "input_dim must be a positive multiple of 4";
  }
  if (subsample_channels < 1 || model_dim < 1 || num_blocks < 0 || ffn_dim < 1) {
    TSRNNT_ERR_CODE(ErrorCode::kUsage) << "bad encoder dimensions";
  }
  if (num_heads < 1 || model_dim % num_heads != 0) {
    TSRNNT_ERR_CODE(ErrorCode::kUsage)
        << "model_dim " << model_dim << " is not divisible by " << num_heads << " heads";
  }
  if (conv_kernel < 1 || conv_kernel % 2 == 0) {
    TSRNNT_ERR_CODE(ErrorCode::kUsage) << "conv_kernel must be odd";
  }
  if (regime.kind == MaskRegime::Kind::kChunked && regime.chunk < 1) {
    TSRNNT_ERR_CODE(ErrorCode::kUsage) << "chunk size must be >= 1";
  }
  FusionAfter();
}

void EncoderConfig::Write(const std::string &prefix, KeyValues *kv) const {
  kv->Set(prefix + "input_dim", std::to_string(input_dim));
  kv->Set(prefix + "subsample_channels", std::to_string(subsample_channels));
  kv->Set(prefix + "model_dim", std::to_string(model_dim));
  kv->Set(prefix + "num_blocks", std::to_string(num_blocks));
  kv->Set(prefix + "num_heads", std::to_string(num_heads));
  kv->Set(prefix + "ffn_dim", std::to_string(ffn_dim));
  kv->Set(prefix + "conv_kernel", std::to_string(conv_kernel));
  kv->Set(prefix + "fusion", fusion);
  kv->Set(prefix + "regime", regime.ToString());
}

EncoderConfig EncoderConfig::Read(const std::string &prefix, const KeyValues &kv) {
  EncoderConfig c;
  c.input_dim = kv.GetInt(prefix + "input_dim", c.input_dim);
  c.subsample_channels = kv.GetInt(prefix + "subsample_channels", c.subsample_channels);
  c.model_dim = kv.GetInt(prefix + "model_dim", c.model_dim);
  c.num_blocks = kv.GetInt(prefix + "num_blocks", c.num_blocks);
  c.num_heads = kv.GetInt(prefix + "num_heads", c.num_heads);
  c.ffn_dim = kv.GetInt(prefix + "ffn_dim", c.ffn_dim);
  c.conv_kernel = kv.GetInt(prefix + "conv_kernel", c.conv_kernel);
  c.fusion = kv.Get(prefix + "fusion", c.fusion);
  c.regime = MaskRegime::Parse(kv.Get(prefix + "regime", c.regime.ToString()));
  c.Check();
  return c;
}

void InitEncoderParams(const EncoderConfig &cfg, const std::string &prefix,
                       Rng *rng, ParamSet *params) {
  cfg.Check();
  const int32_t c = cfg.subsample_channels, d = cfg.model_dim;
  params->Add(prefix + "sub.conv1.w", Tensor::RandomNormal({c, 9}, 1.0f / 3.0f, rng));
  params->Add(prefix + "sub.conv1.b", Tensor({c}, 0.0f));
  params->Add(prefix + "sub.conv2.w",
              Tensor::RandomNormal({c, c * 9}, 1.0f / std::sqrt(9.0f * c), rng));
  params->Add(prefix + "sub.conv2.b", Tensor({c}, 0.0f));
  AddLinear(prefix + "sub.out", c * (cfg.input_dim / 4), d, rng, params);
  for (int32_t b = 0; b < cfg.num_blocks; ++b) {
    std::string p = BlockPrefix(prefix, b);
    for (const char *ffn : {"ffn1", "ffn2"}) {
      AddLayerNorm(p + ffn + ".ln", d, params);
      AddLinear(p + ffn + ".l1", d, cfg.ffn_dim, rng, params);
      AddLinear(p + ffn + ".l2", cfg.ffn_dim, d, rng, params, 0.5f);
    }
    AddLayerNorm(p + "mhsa.ln", d, params);
    for (const char *m : {"mhsa.q", "mhsa.k", "mhsa.v"}) AddLinear(p + m, d, d, rng, params);
    AddLinear(p + "mhsa.out", d, d, rng, params, 0.5f);
    AddLayerNorm(p + "conv.ln", d, params);
    AddLinear(p + "conv.pw1", d, 2 * d, rng, params);
    params->Add(p + "conv.dw",
                Tensor::RandomNormal({cfg.conv_kernel, d},
                                     1.0f / std::sqrt(float(cfg.conv_kernel)), rng));
    AddLayerNorm(p + "conv.ln2", d, params);
    AddLinear(p + "conv.pw2", d, d, rng, params, 0.5f);
    AddLayerNorm(p + "final_ln", d, params);
  }
}

Tensor NormalizeFeatures(const ParamSet &params, const Tensor &feats) {
  Tensor out = feats;
  if (!params.Has("feat.mean")) return out;
  const Tensor &mean = params.Get("feat.mean");
  const Tensor &inv_std = params.Get("feat.inv_std");
  if (mean.NumElements() != feats.NumCols()) {
    TSRNNT_ERR_CODE(ErrorCode::kShape)
        << "feature dim " << feats.NumCols() << " vs normaliser " << mean.NumElements();
  }
  for (int32_t t = 0; t < out.NumRows(); ++t) {
    auto row = out.Row(t);
    for (int32_t c = 0; c < out.NumCols(); ++c) row[c] = (row[c] - mean[c]) * inv_std[c];
  }
  return out;
}

Tensor SinusoidalPositions(int32_t start, int32_t n, int32_t dim) {
  Tensor pe = Tensor::Matrix(n, dim);
  for (int32_t t = 0; t < n; ++t) {
    double pos = start + t;
    for (int32_t i = 0; i < dim; ++i) {
      double rate = std::pow(10000.0, -static_cast<double>(i - i % 2) / dim);
      pe(t, i) = static_cast<float>(i % 2 == 0 ? std::sin(pos * rate) : std::cos(pos * rate));
    }
  }
  return pe;
}

Var Subsample(Tape &tape, const ParamSet &params, const std::string &prefix,
              const EncoderConfig &cfg, const Tensor &feats) {
  if (feats.NumCols() != cfg.input_dim) {
    TSRNNT_ERR_CODE(ErrorCode::kShape)
        << "expected " << cfg.input_dim << "-dim features, got " << feats.ShapeString();
  }
  if (feats.NumRows() < 4) {
    TSRNNT_ERR_CODE(ErrorCode::kData)
        << "need at least 4 feature frames, got " << feats.NumRows();
  }
  const int32_t c = cfg.subsample_channels, f = cfg.input_dim;
  Var y = tape.Constant(ZeroPadRows(feats));
  y = Conv2d(y, params(tape, prefix + "sub.conv1.w"), params(tape, prefix + "sub.conv1.b"), 1, f);
  y = AvgPool2d(Swish(y), c, f);
  Var zero = tape.Constant(Tensor::Matrix(1, c * (f / 2)));
  Var parts[3] = {zero, y, zero};
  y = Concat(parts, 0);
  y = Conv2d(y, params(tape, prefix + "sub.conv2.w"), params(tape, prefix + "sub.conv2.b"), c,
             f / 2);
  y = AvgPool2d(Swish(y), c, f / 2);
  y = Linear(tape, params, prefix + "sub.out", y);
  return Add(y, tape.Constant(SinusoidalPositions(0, y.Value().NumRows(), cfg.model_dim)));
}

Var ConformerBlock(Tape &tape, const ParamSet &params, const std::string &p,
                   const EncoderConfig &cfg, Var x, int32_t start,
                   BlockCache *cache) {
  const int32_t n = x.Value().NumRows(), d = cfg.model_dim;
  if (cache != nullptr && !cfg.CausalConv()) {
    TSRNNT_ERR_CODE(ErrorCode::kUsage) << "block caches need a streaming regime";
  }
  x = Add(x, Scale(FeedForward(tape, params, p + "ffn1", x), 0.5f));

  // Self-attention.
  Var h = Norm(tape, params, p + "mhsa.ln", x);
  Var q = Linear(tape, params, p + "mhsa.q", h);
  Var k = Linear(tape, params, p + "mhsa.k", h);
  Var v = Linear(tape, params, p + "mhsa.v", h);
  int32_t k0 = start;
  if (cache != nullptr && !cache->keys.Empty() && cache->keys.NumRows() > 0) {
    Var kp[2] = {tape.Constant(cache->keys), k};
    Var vp[2] = {tape.Constant(cache->values), v};
    k = Concat(kp, 0);
    v = Concat(vp, 0);
    k0 = cache->first_key;
  }
  const int32_t nk = k.Value().NumRows();
  BoolMatrix mask = AttentionMaskBlock(cfg.regime, start, n, k0, nk);
  const int32_t dh = d / cfg.num_heads;
  const float scale = 1.0f / std::sqrt(static_cast<float>(dh));
  std::vector<Var> heads;
  for (int32_t hd = 0; hd < cfg.num_heads; ++hd) {
    Var qh = SliceCols(q, hd * dh, (hd + 1) * dh);
    Var kh = SliceCols(k, hd * dh, (hd + 1) * dh);
    Var vh = SliceCols(v, hd * dh, (hd + 1) * dh);
    Var att = MaskedSoftmax(Scale(MatMul(qh, kh, true), scale), mask);
    heads.push_back(MatMul(att, vh));
  }
  Var att_out = cfg.num_heads == 1 ? heads[0] : Concat(heads, 1);
  x = Add(x, Linear(tape, params, p + "mhsa.out", att_out));
  if (cache != nullptr) {
    int32_t keep_from = OldestKeyNeeded(cfg.regime, start + n);
    int32_t drop = std::clamp(keep_from - k0, 0, nk);
    const Tensor &kv = k.Value();
    const Tensor &vv = v.Value();
    cache->keys = Tensor::Matrix(nk - drop, d);
    cache->values = Tensor::Matrix(nk - drop, d);
    std::copy(kv.Values().begin() + int64_t(drop) * d, kv.Values().end(),
              cache->keys.Values().begin());
    std::copy(vv.Values().begin() + int64_t(drop) * d, vv.Values().end(),
              cache->values.Values().begin());
    cache->first_key = k0 + drop;
  }

  // Convolution module.
  Var g = Glu(Linear(tape, params, p + "conv.pw1", Norm(tape, params, p + "conv.ln", x)));
  Var dw = params(tape, p + "conv.dw");
  Var conv;
  if (cache == nullptr) {
    conv = DepthwiseConv1d(g, dw, cfg.CausalConv());
  } else {
    int32_t tail = cache->conv_tail.Empty() ? 0 : cache->conv_tail.NumRows();
    Var full = g;
    if (tail > 0) {
      Var gp[2] = {tape.Constant(cache->conv_tail), g};
      full = Concat(gp, 0);
    }
    conv = SliceRows(DepthwiseConv1d(full, dw, true), tail, tail + n);
    const Tensor &fv = full.Value();
    int32_t keep = std::min(cfg.conv_kernel - 1, fv.NumRows());
    cache->conv_tail = Tensor::Matrix(keep, d);
    std::copy(fv.Values().end() - int64_t(keep) * d, fv.Values().end(),
              cache->conv_tail.Values().begin());
  }
  conv = Swish(Norm(tape, params, p + "conv.ln2", conv));
  x = Add(x, Linear(tape, params, p + "conv.pw2", conv));

  x = Add(x, Scale(FeedForward(tape, params, p + "ffn2", x), 0.5f));
  return Norm(tape, params, p + "final_ln", x);
}

Var Fuse(Var h, Var embedding) {
  const Tensor &e = embedding.Value();
  if (e.NumElements() != h.Value().NumCols()) {
    TSRNNT_ERR_CODE(ErrorCode::kShape)
        << "speaker embedding " << e.ShapeString() << " does not match hidden "
        << h.Value().ShapeString();
  }
  return Mul(h, embedding);
}

Var Encode(Tape &tape, const ParamSet &params, const std::string &prefix,
           const EncoderConfig &cfg, const Tensor &feats, const Var *embedding) {
  if (cfg.TargetSpeaker() && embedding == nullptr) {
    TSRNNT_ERR_CODE(ErrorCode::kUsage)
        << "target-speaker encoder (fusion=" << cfg.fusion << ") needs a speaker embedding";
  }
  if (!cfg.TargetSpeaker() && embedding != nullptr) {
    TSRNNT_ERR_CODE(ErrorCode::kUsage) << "vanilla encoder (fusion=none) got a speaker embedding";
  }
  std::vector<bool> fuse_after = cfg.FusionAfter();
  Var x = Subsample(tape, params, prefix, cfg, feats);
  for (int32_t b = 0; b < cfg.num_blocks; ++b) {
    x = ConformerBlock(tape, params, BlockPrefix(prefix, b), cfg, x, 0, nullptr);
    if (fuse_after[b]) x = Fuse(x, *embedding);
  }
  return x;
}

EncoderConfig SpeakerEncoderConfig(const EncoderConfig &asr, int32_t num_blocks) {
  EncoderConfig c = asr;
  c.num_blocks = num_blocks;
  c.fusion = "none";
  c.regime = MaskRegime::Offline();
  return c;
}

void InitSpeakerEncoderParams(const EncoderConfig &spk_cfg, const std::string &prefix,
                              Rng *rng, ParamSet *params) {
  InitEncoderParams(spk_cfg, prefix, rng, params);
  const int32_t d = spk_cfg.model_dim;
  // Starts close to the all-ones embedding, i.e. close to no fusion.
  params->Add(prefix + "proj.w", Tensor::RandomNormal({d, d}, 0.01f, rng));
  params->Add(prefix + "proj.b", Tensor::Matrix(1, d, 1.0f));
}

Var SpeakerEncode(Tape &tape, const ParamSet &params, const std::string &prefix,
                  const EncoderConfig &spk_cfg, const Tensor &enroll_feats) {
  if (enroll_feats.Empty() || enroll_feats.NumRows() == 0) {
    TSRNNT_ERR_CODE(ErrorCode::kData) << "empty enrollment";
  }
  Var h = Encode(tape, params, prefix, spk_cfg, enroll_feats, nullptr);
  return MeanOverTime(Linear(tape, params, prefix + "proj", h));
}

}  // namespace tsrnnt
