// tests/encoder-test.cc
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

#include <cmath>

#include "base/error.h"
#include "encoder/encoder.h"
#include "encoder/streaming-encoder.h"
#include "gtest/gtest.h"

namespace tsrnnt {
namespace {

EncoderConfig SmallConfig(MaskRegime regime, const std::string &fusion = "1") {
  EncoderConfig cfg;
  cfg.input_dim = 16;
  cfg.subsample_channels = 2;
  cfg.model_dim = 8;
  cfg.num_blocks = 2;
  cfg.num_heads = 2;
  cfg.ffn_dim = 12;
  cfg.conv_kernel = 5;
  cfg.fusion = fusion;
  cfg.regime = regime;
  return cfg;
}

Tensor EncodeValue(const ParamSet &ps, const EncoderConfig &cfg, const Tensor &feats,
                   const Tensor *emb) {
  Tape tape(false);
  Var e;
  if (emb) e = tape.Constant(*emb);
  return Encode(tape, ps, "enc.", cfg, feats, emb ? &e : nullptr).Value();
}

TEST(AttentionMaskTest, Examples) {
  BoolMatrix off = BuildAttentionMask(MaskRegime::Offline(), 3);
  EXPECT_EQ(off.CountTrue(), 9);
  BoolMatrix causal = BuildAttentionMask(MaskRegime::Causal(), 3);
  for (int q = 0; q < 3; ++q) {
    for (int k = 0; k < 3; ++k) EXPECT_EQ(causal(q, k), k <= q);
  }
  BoolMatrix ch = BuildAttentionMask(MaskRegime::Chunked(2), 5);
  auto sees = [&](int q) {
    std::vector<int> out;
    for (int k = 0; k < 5; ++k) {
      if (ch(q, k)) out.push_back(k);
    }
    return out;
  };
  EXPECT_EQ(sees(0), (std::vector<int>{0, 1}));
  EXPECT_EQ(sees(1), (std::vector<int>{0, 1}));
  EXPECT_EQ(sees(2), (std::vector<int>{0, 1, 2, 3}));
  EXPECT_EQ(sees(3), (std::vector<int>{0, 1, 2, 3}));
  EXPECT_EQ(sees(4), (std::vector<int>{0, 1, 2, 3, 4}));
  EXPECT_THROW(MaskRegime::Chunked(0), Error);
  EXPECT_THROW(BuildAttentionMask(MaskRegime::Causal(), 0), Error);
}

TEST(AttentionMaskTest, FiniteLeftContextAllowsFewerEntries) {
  for (int32_t c = 1; c <= 4; ++c) {
    for (int32_t n = 1; n <= 6; ++n) {
      int64_t inf = BuildAttentionMask(MaskRegime::Chunked(c), 20).CountTrue();
      int64_t fin = BuildAttentionMask(MaskRegime::Chunked(c, n), 20).CountTrue();
      EXPECT_LT(fin, inf) << c << " " << n;
    }
  }
  // left context covers at least n frames
  BoolMatrix m = BuildAttentionMask(MaskRegime::Chunked(4, 5), 16);
  for (int32_t q = 8; q < 16; ++q) {
    for (int32_t k = q - 5; k <= q; ++k) EXPECT_TRUE(m(q, k)) << q << "," << k;
  }
}

TEST(AttentionMaskTest, OldestKeyNeededCoversEveryLaterQuery) {
  for (MaskRegime r : {MaskRegime::Causal(3), MaskRegime::Causal(), MaskRegime::Chunked(3, 4),
                       MaskRegime::Chunked(2, 1), MaskRegime::Chunked(5)}) {
    for (int32_t q = 0; q < 30; ++q) {
      int32_t oldest = OldestKeyNeeded(r, q);
      for (int32_t later = q; later < 40; ++later) {
        for (int32_t k = 0; k < oldest; ++k) ASSERT_FALSE(AttentionAllowed(r, later, k));
      }
    }
  }
}

TEST(AttentionMaskTest, ParseAndLatency) {
  EXPECT_EQ(MaskRegime::Parse("chunked:600ms"), MaskRegime::Chunked(15));
  EXPECT_EQ(MaskRegime::Parse("chunked:15:left=16"), MaskRegime::Chunked(15, 16));
  EXPECT_EQ(MaskRegime::Parse("causal"), MaskRegime::Causal());
  EXPECT_EQ(MaskRegime::Parse("offline"), MaskRegime::Offline());
  EXPECT_EQ(MaskRegime::Parse(MaskRegime::Chunked(3, 7).ToString()), MaskRegime::Chunked(3, 7));
  EXPECT_THROW(MaskRegime::Parse("chunked:610ms"), Error);
  EXPECT_THROW(MaskRegime::Parse("sideways"), Error);
  EXPECT_EQ(AverageLatencyMs(MaskRegime::Chunked(15)), 330.0);
  EXPECT_EQ(AverageLatencyMs(MaskRegime::Causal()), 30.0);
  EXPECT_EQ(LookaheadFeatureFrames(MaskRegime::Causal()), 3);
  EXPECT_THROW(AverageLatencyMs(MaskRegime::Offline()), Error);
}

TEST(SubsampleTest, FrameCounts) {
  EncoderConfig cfg = SmallConfig(MaskRegime::Offline());
  ParamSet ps;
  Rng rng(1);
  InitEncoderParams(cfg, "enc.", &rng, &ps);
  auto frames = [&](int32_t t) {
    Tape tape(false);
    return Subsample(tape, ps, "enc.", cfg, Tensor::RandomNormal({t, 16}, 1.0f, &rng))
        .Value()
        .NumRows();
  };
  EXPECT_EQ(frames(98), 24);
  EXPECT_EQ(frames(4), 1);
  for (int32_t t = 4; t < 60; ++t) {
    EXPECT_EQ(frames(t), t / 4);
    EXPECT_LE(std::abs(frames(2 * t) - 2 * frames(t)), 1);
  }
  Tape tape(false);
  EXPECT_THROW(Subsample(tape, ps, "enc.", cfg, Tensor::Matrix(3, 16)), Error);
}

TEST(FuseTest, OnesZerosAndScaling) {
  Rng rng(2);
  Tape tape(false);
  Var h = tape.Constant(Tensor::RandomNormal({5, 4}, 1.0f, &rng));
  EXPECT_EQ(Fuse(h, tape.Constant(Tensor::Matrix(1, 4, 1.0f))).Value(), h.Value());
  for (float v : Fuse(h, tape.Constant(Tensor::Matrix(1, 4, 0.0f))).Value().Values()) {
    EXPECT_EQ(v, 0.0f);
  }
  Tensor e = Tensor::RandomNormal({1, 4}, 1.0f, &rng), e2 = e;
  for (float &v : e2.Values()) v *= 2.0f;
  Tensor a = Fuse(h, tape.Constant(e)).Value(), b = Fuse(h, tape.Constant(e2)).Value();
  for (int64_t i = 0; i < a.NumElements(); ++i) EXPECT_EQ(2.0f * a[i], b[i]);
  EXPECT_THROW(Fuse(h, tape.Constant(Tensor::Matrix(1, 3, 1.0f))), Error);
}

TEST(SpeakerEncoderTest, PoolingProperties) {
  Rng rng(3);
  Tape tape(false);
  Tensor row = Tensor::RandomNormal({1, 6}, 1.0f, &rng);
  std::vector<float> rep;
  for (int i = 0; i < 7; ++i) rep.insert(rep.end(), row.Values().begin(), row.Values().end());
  Tensor constant({7, 6}, rep);
  Tensor pooled = MeanOverTime(tape.Constant(constant)).Value();
  for (int c = 0; c < 6; ++c) EXPECT_NEAR(pooled[c], row[c], 1e-6);
  // periodic hidden states: [H; H] pools to the same vector as H
  Tensor h = Tensor::RandomNormal({9, 6}, 1.0f, &rng);
  std::vector<float> twice = h.Vector();
  twice.insert(twice.end(), h.Values().begin(), h.Values().end());
  Tensor a = MeanOverTime(tape.Constant(h)).Value();
  Tensor b = MeanOverTime(tape.Constant(Tensor({18, 6}, twice))).Value();
  EXPECT_LT(MaxAbsDiff(a, b), 1e-5);
}

TEST(SpeakerEncoderTest, EmbeddingShapeAndInitialValue) {
  EncoderConfig cfg = SpeakerEncoderConfig(SmallConfig(MaskRegime::Offline()), 1);
  ParamSet ps;
  Rng rng(4);
  InitSpeakerEncoderParams(cfg, "spk.", &rng, &ps);
  Tape tape(false);
  Tensor e = SpeakerEncode(tape, ps, "spk.", cfg, Tensor::RandomNormal({40, 16}, 1.0f, &rng)).Value();
  ASSERT_EQ(e.Shape(), (std::vector<int32_t>{1, 8}));
  for (float v : e.Values()) EXPECT_NEAR(v, 1.0f, 0.2f);
  EXPECT_THROW(SpeakerEncode(tape, ps, "spk.", cfg, Tensor()), Error);
}

TEST(EncodeTest, EmbeddingPresenceMustMatchConfig) {
  Rng rng(5);
  ParamSet ps;
  EncoderConfig ts = SmallConfig(MaskRegime::Offline(), "1");
  EncoderConfig vanilla = SmallConfig(MaskRegime::Offline(), "none");
  InitEncoderParams(ts, "enc.", &rng, &ps);
  Tensor feats = Tensor::RandomNormal({30, 16}, 1.0f, &rng);
  Tensor ones = Tensor::Matrix(1, 8, 1.0f);
  EXPECT_THROW(EncodeValue(ps, ts, feats, nullptr), Error);
  EXPECT_THROW(EncodeValue(ps, vanilla, feats, &ones), Error);
}

TEST(EncodeTest, AllOnesFusionIsExactIdentity) {
  for (MaskRegime r : {MaskRegime::Offline(), MaskRegime::Causal(), MaskRegime::Chunked(3)}) {
    for (const char *fusion : {"1", "2", "all", "1-2"}) {
      Rng rng(6);
      ParamSet ps;
      EncoderConfig ts = SmallConfig(r, fusion);
      InitEncoderParams(ts, "enc.", &rng, &ps);
      Tensor feats = Tensor::RandomNormal({50, 16}, 1.0f, &rng);
      Tensor ones = Tensor::Matrix(1, 8, 1.0f);
      EXPECT_EQ(EncodeValue(ps, ts, feats, &ones),
                EncodeValue(ps, SmallConfig(r, "none"), feats, nullptr));
    }
  }
}

TEST(EncodeTest, UtterancesDoNotInteract) {
  Rng rng(7);
  ParamSet ps;
  EncoderConfig cfg = SmallConfig(MaskRegime::Offline(), "none");
  InitEncoderParams(cfg, "enc.", &rng, &ps);
  Tensor a = Tensor::RandomNormal({30, 16}, 1.0f, &rng), b = Tensor::RandomNormal({45, 16}, 1.0f, &rng);
  Tape t1(false), t2(false);
  Tensor a1 = Encode(t1, ps, "enc.", cfg, a, nullptr).Value();
  Tensor b1 = Encode(t1, ps, "enc.", cfg, b, nullptr).Value();
  Tensor b2 = Encode(t2, ps, "enc.", cfg, b, nullptr).Value();
  Tensor a2 = Encode(t2, ps, "enc.", cfg, a, nullptr).Value();
  EXPECT_EQ(a1, a2);
  EXPECT_EQ(b1, b2);
}

TEST(EncodeTest, ChunkCoveringEverythingMatchesOffline) {
  // The masks coincide; with a 1-tap convolution the causal and centred
  // convolutions coincide as well.
  EXPECT_EQ(BuildAttentionMask(MaskRegime::Chunked(50), 12),
            BuildAttentionMask(MaskRegime::Offline(), 12));
  Rng rng(8);
  ParamSet ps;
  EncoderConfig off = SmallConfig(MaskRegime::Offline(), "none");
  off.conv_kernel = 1;
  InitEncoderParams(off, "enc.", &rng, &ps);
  EncoderConfig ch = off;
  ch.regime = MaskRegime::Chunked(50);
  Tensor feats = Tensor::RandomNormal({48, 16}, 1.0f, &rng);
  EXPECT_EQ(EncodeValue(ps, off, feats, nullptr), EncodeValue(ps, ch, feats, nullptr));
}

// Frames whose receptive field lies inside the truncated input are unchanged.
int32_t ValidFrames(const MaskRegime &r, int32_t t_feats, int32_t total_frames) {
  int32_t valid = 0;
  while (valid < total_frames && 4 * valid + 6 <= t_feats - 1) ++valid;
  if (r.kind == MaskRegime::Kind::kChunked) valid = (valid / r.chunk) * r.chunk;
  return valid;
}

TEST(EncodeTest, TruncationLeavesEarlierFramesUnchanged) {
  for (MaskRegime r : {MaskRegime::Causal(), MaskRegime::Chunked(3), MaskRegime::Chunked(2, 2)}) {
    Rng rng(9);
    ParamSet ps;
    EncoderConfig cfg = SmallConfig(r, "none");
    InitEncoderParams(cfg, "enc.", &rng, &ps);
    Tensor feats = Tensor::RandomNormal({80, 16}, 1.0f, &rng);
    Tensor full = EncodeValue(ps, cfg, feats, nullptr);
    for (int32_t t = 8; t < 80; t += 7) {
      Tensor part({t, 16}, std::vector<float>(feats.Values().begin(), feats.Values().begin() + t * 16));
      Tensor out = EncodeValue(ps, cfg, part, nullptr);
      int32_t valid = ValidFrames(r, t, out.NumRows());
      for (int32_t s = 0; s < valid; ++s) {
        for (int32_t c = 0; c < 8; ++c) ASSERT_EQ(out(s, c), full(s, c)) << r.ToString() << " t=" << t;
      }
    }
  }
}

Tensor StreamAll(const ParamSet &ps, const EncoderConfig &cfg, const Tensor &feats,
                 const Tensor *emb, Rng *rng, int32_t *peak = nullptr) {
  StreamingEncoder enc(&ps, "enc.", cfg, emb);
  std::vector<float> out;
  int32_t t = 0;
  while (t < feats.NumRows()) {
    int32_t n = std::min<int32_t>(feats.NumRows() - t, rng->UniformInt(0, 9));
    Tensor piece({n, feats.NumCols()},
                 std::vector<float>(feats.Values().begin() + t * feats.NumCols(),
                                    feats.Values().begin() + (t + n) * feats.NumCols()));
    Tensor y = enc.Accept(piece);
    out.insert(out.end(), y.Values().begin(), y.Values().end());
    t += n;
  }
  Tensor y = enc.Finalize();
  out.insert(out.end(), y.Values().begin(), y.Values().end());
  if (peak) *peak = enc.PeakBufferedRows();
  return Tensor({static_cast<int32_t>(out.size() / cfg.model_dim), cfg.model_dim}, out);
}

TEST(StreamingEncoderTest, MatchesFullSequenceBitForBit) {
  for (MaskRegime r : {MaskRegime::Causal(), MaskRegime::Causal(4), MaskRegime::Chunked(3),
                       MaskRegime::Chunked(2, 3)}) {
    for (int32_t len : {4, 5, 17, 63, 90}) {
      Rng rng(10 + len);
      ParamSet ps;
      EncoderConfig cfg = SmallConfig(r, "all");
      InitEncoderParams(cfg, "enc.", &rng, &ps);
      Tensor feats = Tensor::RandomNormal({len, 16}, 1.0f, &rng);
      Tensor emb = Tensor::RandomNormal({1, 8}, 1.0f, &rng);
      Tensor full = EncodeValue(ps, cfg, feats, &emb);
      Tensor streamed = StreamAll(ps, cfg, feats, &emb, &rng);
      ASSERT_EQ(streamed, full) << r.ToString() << " len " << len;
    }
  }
}

TEST(StreamingEncoderTest, FiniteLeftContextBoundsMemory) {
  Rng rng(11);
  ParamSet ps;
  EncoderConfig cfg = SmallConfig(MaskRegime::Causal(6), "none");
  InitEncoderParams(cfg, "enc.", &rng, &ps);
  int32_t peak_short = 0, peak_long = 0;
  StreamAll(ps, cfg, Tensor::RandomNormal({100, 16}, 1.0f, &rng), nullptr, &rng, &peak_short);
  StreamAll(ps, cfg, Tensor::RandomNormal({800, 16}, 1.0f, &rng), nullptr, &rng, &peak_long);
  EXPECT_EQ(peak_short, peak_long);
  EXPECT_LE(peak_long, 6 + cfg.conv_kernel + 9);  // cache + largest pushed piece
}

TEST(StreamingEncoderTest, RejectsOfflineAndBadEmbeddings) {
  Rng rng(12);
  ParamSet ps;
  EncoderConfig cfg = SmallConfig(MaskRegime::Causal(), "1");
  InitEncoderParams(cfg, "enc.", &rng, &ps);
  Tensor good = Tensor::Matrix(1, 8, 1.0f), bad = Tensor::Matrix(1, 7, 1.0f);
  EXPECT_THROW(StreamingEncoder(&ps, "enc.", SmallConfig(MaskRegime::Offline()), &good), Error);
  EXPECT_THROW(StreamingEncoder(&ps, "enc.", cfg, &bad), Error);
  EXPECT_THROW(StreamingEncoder(&ps, "enc.", cfg, nullptr), Error);
  StreamingEncoder enc(&ps, "enc.", cfg, &good);
  enc.Finalize();
  EXPECT_THROW(enc.Finalize(), Error);
}

}  // namespace
}  // namespace tsrnnt
