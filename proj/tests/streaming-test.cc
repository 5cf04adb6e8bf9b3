// tests/streaming-test.cc
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
#include "gtest/gtest.h"
#include "simulate/toy-corpus.h"
#include "streaming/benchmark.h"

namespace tsrnnt {
namespace {

ModelConfig StreamModel(const std::string &fusion = "1") {
  ModelConfig c;
  c.encoder.input_dim = 80;
  c.encoder.subsample_channels = 2;
  c.encoder.model_dim = 16;
  c.encoder.num_blocks = 2;
  c.encoder.num_heads = 2;
  c.encoder.ffn_dim = 32;
  c.encoder.conv_kernel = 5;
  c.encoder.fusion = fusion;
  c.vocab_size = 4;
  c.embed_dim = 8;
  c.pred_hidden = 8;
  c.pred_dim = 8;
  c.joint_dim = 8;
  return c;
}

class StreamingTest : public ::testing::Test {
 protected:
  StreamingTest() : corpus_(SmallCorpus()), model_(StreamModel(), 5) {
    Rng rng(1);
    emb_ = Tensor::RandomUniform({1, 16}, 0.5f, 1.5f, &rng);
  }
  static ToyCorpusConfig SmallCorpus() {
    ToyCorpusConfig c;
    c.num_speakers = 3;
    c.utts_per_speaker = 4;
    c.vocab_size = 4;
    return c;
  }
  Waveform Utt(int32_t i) const { return corpus_.Render(i); }

  ToyCorpus corpus_;
  Model model_;
  Tensor emb_;
};

SearchOptions Greedy() {
  SearchOptions o;
  o.kind = SearchKind::kGreedy;
  return o;
}

TEST_F(StreamingTest, MatchesOfflineForEveryRegime) {
  for (const char *regime : {"causal", "causal:left=6", "chunked:3", "chunked:4:left=4"}) {
    for (SearchOptions opts : {Greedy(), SearchOptions{}}) {
      for (int32_t u = 0; u < 3; ++u) {
        EquivalenceResult r = StreamingEquivalenceCheck(model_, Utt(u), &emb_,
                                                        MaskRegime::Parse(regime), opts, 1600);
        EXPECT_LT(r.max_abs_dev, 1e-4) << regime;
        EXPECT_EQ(r.max_abs_dev, 0.0) << regime;
        EXPECT_TRUE(r.tokens_equal) << regime;
        EXPECT_GT(r.num_frames, 5);
      }
    }
  }
}

TEST_F(StreamingTest, PushSizeDoesNotMatter) {
  Waveform w = Utt(4);
  for (const char *regime : {"causal", "chunked:5"}) {
    MaskRegime m = MaskRegime::Parse(regime);
    SessionResult whole = StreamUtterance(model_, &emb_, m, w, {}, w.samples.size());
    for (int64_t push : {160, 1600, 777}) {
      SessionResult piece = StreamUtterance(model_, &emb_, m, w, {}, push);
      EXPECT_EQ(piece.tokens, whole.tokens);
      EXPECT_EQ(piece.encoder_out, whole.encoder_out);
    }
  }
}

TEST_F(StreamingTest, EmissionsOnlyExtend) {
  for (SearchOptions opts : {Greedy(), SearchOptions{}}) {
    Session s(&model_, &emb_, MaskRegime::Causal(), opts);
    Waveform w = Utt(5);
    std::vector<int32_t> all;
    for (size_t pos = 0; pos < w.samples.size(); pos += 800) {
      auto fresh = s.PushAudio(std::span<const float>(w.samples).subspan(
          pos, std::min<size_t>(800, w.samples.size() - pos)));
      all.insert(all.end(), fresh.begin(), fresh.end());
      EXPECT_EQ(all, s.Emitted());
    }
    SessionResult r = s.Finalize();
    ASSERT_GE(r.tokens.size(), all.size());
    EXPECT_TRUE(std::equal(all.begin(), all.end(), r.tokens.begin()));
  }
}

TEST_F(StreamingTest, FramesWaitForTheirAudio) {
  for (const char *regime : {"causal", "chunked:4"}) {
    MaskRegime m = MaskRegime::Parse(regime);
    SessionResult r = StreamUtterance(model_, &emb_, m, Utt(6), {}, 160);
    int32_t early = 0;
    for (const FrameStamp &st : r.stamps) {
      if (st.at_finalize) continue;
      ++early;
      EXPECT_GE(st.samples_pushed, st.samples_needed) << regime << " frame " << st.frame;
      if (m.kind == MaskRegime::Kind::kChunked) {
        // a chunk leaves together
        int32_t first = st.frame / m.chunk * m.chunk;
        EXPECT_EQ(st.samples_pushed, r.stamps[first].samples_pushed);
      }
    }
    EXPECT_GT(early, 0);
  }
}

TEST_F(StreamingTest, CorruptedCacheIsDetected) {
  SessionHook corrupt = [](Session *s, int32_t push) {
    if (push != 6) return;
    BlockCache *c = s->MutableEncoder()->MutableCache(0);
    for (float &v : c->keys.Values()) v += 1.0f;
    for (float &v : c->values.Values()) v *= -1.0f;
  };
  EquivalenceResult r = StreamingEquivalenceCheck(model_, Utt(2), &emb_, MaskRegime::Causal(),
                                                  Greedy(), 1600, corrupt);
  EXPECT_GT(r.max_abs_dev, 1e-2);
}

TEST_F(StreamingTest, SessionsAreIndependent) {
  Waveform a = Utt(0), b = Utt(7);
  SessionResult ra = StreamUtterance(model_, &emb_, MaskRegime::Causal(), a, {}, 1600);
  SessionResult rb = StreamUtterance(model_, &emb_, MaskRegime::Causal(), b, {}, 1600);
  Session sa(&model_, &emb_, MaskRegime::Causal()), sb(&model_, &emb_, MaskRegime::Causal());
  size_t n = std::max(a.samples.size(), b.samples.size());
  for (size_t pos = 0; pos < n; pos += 1600) {
    if (pos < a.samples.size())
      sa.PushAudio(std::span<const float>(a.samples).subspan(pos, std::min<size_t>(1600, a.samples.size() - pos)));
    if (pos < b.samples.size())
      sb.PushAudio(std::span<const float>(b.samples).subspan(pos, std::min<size_t>(1600, b.samples.size() - pos)));
  }
  EXPECT_EQ(sa.Finalize().tokens, ra.tokens);
  EXPECT_EQ(sb.Finalize().tokens, rb.tokens);
}

TEST_F(StreamingTest, OpenAndLifecycleErrors) {
  EXPECT_THROW(Session(&model_, &emb_, MaskRegime::Offline()), Error);
  Tensor wrong = Tensor::Matrix(1, 8, 1.0f);
  EXPECT_THROW(Session(&model_, &wrong, MaskRegime::Causal()), Error);
  EXPECT_THROW(Session(&model_, nullptr, MaskRegime::Causal()), Error);
  Model vanilla(StreamModel("none"), 5);
  Session v(&vanilla, nullptr, MaskRegime::Causal());
  Waveform w = Utt(1);
  v.PushAudio(w.samples);
  v.Finalize();
  EXPECT_THROW(v.Finalize(), Error);
  EXPECT_THROW(v.PushAudio(w.samples), Error);
  Session empty(&model_, &emb_, MaskRegime::Causal());
  EXPECT_THROW(empty.Finalize(), Error);
}

TEST_F(StreamingTest, RtfReportAccounting) {
  std::vector<BenchmarkItem> items;
  for (int32_t i = 0; i < 4; ++i) items.push_back({"u" + std::to_string(i), Utt(i), Utt(11)});
  Model vanilla(StreamModel("none"), 5);
  BenchmarkOptions opts;
  opts.search = Greedy();
  PairedRtfReport rep = RtfBenchmark(vanilla, "rnnt", model_, "ts-rnnt", items,
                                     MaskRegime::Chunked(15), opts);
  EXPECT_EQ(rep.a.avg_latency_ms, 330.0);
  EXPECT_EQ(rep.a.per_utt.size(), 4u);
  EXPECT_NEAR(rep.a.rtf, rep.a.decode_s / rep.a.audio_s, 1e-12);
  EXPECT_EQ(rep.a.embed_s, 0.0);
  EXPECT_GT(rep.b.embed_s, 0.0);
  double audio = 0.0;
  for (auto &u : rep.b.per_utt) audio += u.audio_s;
  EXPECT_NEAR(rep.b.audio_s, audio, 1e-9);
  auto j = rep.ToJson();
  for (const char *key : {"rtf", "decode_s", "audio_s", "avg_latency_ms", "lookback_frames",
                          "lookahead_frames", "per_utt"}) {
    EXPECT_TRUE(j["a"].contains(key)) << key;
  }
  EXPECT_NE(rep.ToText().find("avg latency 330 ms"), std::string::npos) << rep.ToText();
  EXPECT_GT(rep.a.measured_latency_mean_ms, 0.0);

  ModelConfig other = StreamModel();
  other.encoder.num_blocks = 3;
  Model bigger(other, 1);
  EXPECT_THROW(RtfBenchmark(vanilla, "a", bigger, "b", items, MaskRegime::Causal(), opts), Error);
  EXPECT_THROW(RtfBenchmark(vanilla, "a", model_, "b", {}, MaskRegime::Causal(), opts), Error);
  EXPECT_EQ(MakeRtfReport("c", MaskRegime::Causal(), rep.a.per_utt, {}).avg_latency_ms, 30.0);
  EXPECT_THROW(MakeRtfReport("c", MaskRegime::Causal(), {}, {}), Error);
}

}  // namespace
}  // namespace tsrnnt
