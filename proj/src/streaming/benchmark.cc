// streaming/benchmark.cc
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

#include "streaming/benchmark.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "base/error.h"

namespace tsrnnt {

SessionResult StreamUtterance(const Model &model, const Tensor *embedding,
                              const MaskRegime &regime, const Waveform &wave,
                              const SearchOptions &opts, int64_t push_samples,
                              const SessionHook &hook) {
  if (push_samples < 1) TSRNNT_ERR_CODE(ErrorCode::kUsage) << "push size must be positive";
  Session session(&model, embedding, regime, opts);
  std::span<const float> all(wave.samples);
  int32_t index = 0;
  for (size_t pos = 0; pos < all.size(); pos += push_samples, ++index) {
    session.PushAudio(all.subspan(pos, std::min<size_t>(push_samples, all.size() - pos)));
    if (hook) hook(&session, index);
  }
  return session.Finalize();
}

EquivalenceResult StreamingEquivalenceCheck(const Model &model, const Waveform &wave,
                                            const Tensor *embedding, const MaskRegime &regime,
                                            const SearchOptions &opts, int64_t push_samples,
                                            const SessionHook &hook) {
  if (!regime.Streaming()) {
    TSRNNT_ERR_CODE(ErrorCode::kUsage) << "equivalence check needs a streaming regime";
  }
  EquivalenceResult res;
  Fbank fbank;
  Tensor offline = OfflineEncode(model, fbank.Compute(wave).frames, embedding, regime);
  SearchEncoderOutput(model, offline, opts, &res.offline_tokens);
  SessionResult streamed = StreamUtterance(model, embedding, regime, wave, opts, push_samples,
                                           hook);
  res.streaming_tokens = streamed.tokens;
  res.tokens_equal = res.offline_tokens == res.streaming_tokens;
  res.num_frames = offline.NumRows();
  if (!streamed.encoder_out.SameShape(offline)) {
    res.max_abs_dev = INFINITY;
    return res;
  }
  for (int64_t i = 0; i < offline.NumElements(); ++i) {
    res.max_abs_dev = std::max(res.max_abs_dev,
                               std::fabs(double(offline[i]) - double(streamed.encoder_out[i])));
  }
  return res;
}

RtfReport MakeRtfReport(const std::string &label, const MaskRegime &regime,
                        const std::vector<UttTiming> &utts,
                        const std::vector<FrameStamp> &stamps) {
  RtfReport r;
  r.label = label;
  r.regime = regime.ToString();
  for (const UttTiming &u : utts) {
    r.audio_s += u.audio_s;
    r.feature_s += u.feature_s;
    r.encoder_s += u.encoder_s;
    r.search_s += u.search_s;
    r.embed_s += u.embed_s;
  }
  if (!(r.audio_s > 0.0)) TSRNNT_ERR_CODE(ErrorCode::kData) << "RTF of zero seconds of audio";
  r.decode_s = r.feature_s + r.encoder_s + r.search_s;
  r.rtf = r.decode_s / r.audio_s;
  r.avg_latency_ms = AverageLatencyMs(regime);
  r.lookback_frames = LookbackFeatureFrames(regime);
  r.lookahead_frames = LookaheadFeatureFrames(regime);
  std::vector<double> lat;
  for (const FrameStamp &s : stamps) {
    if (s.at_finalize) continue;
    double end_ms = (s.frame + 1) * kEncoderFrameMs;
    lat.push_back(s.samples_pushed / 16.0 - end_ms);
  }
  if (!lat.empty()) {
    double sum = 0.0;
    for (double v : lat) sum += v;
    r.measured_latency_mean_ms = sum / lat.size();
    std::sort(lat.begin(), lat.end());
    r.measured_latency_p90_ms = lat[std::min(lat.size() - 1, size_t(0.9 * lat.size()))];
  }
  r.per_utt = utts;
  return r;
}

nlohmann::ordered_json RtfReport::ToJson() const {
  nlohmann::ordered_json j;
  j["label"] = label;
  j["regime"] = regime;
  j["rtf"] = rtf;
  j["decode_s"] = decode_s;
  j["audio_s"] = audio_s;
  j["feature_s"] = feature_s;
  j["encoder_s"] = encoder_s;
  j["search_s"] = search_s;
  j["speaker_encoder_s"] = embed_s;
  j["avg_latency_ms"] = avg_latency_ms;
  j["lookback_frames"] = lookback_frames;
  j["lookahead_frames"] = lookahead_frames;
  j["measured_latency_mean_ms"] = measured_latency_mean_ms;
  j["measured_latency_p90_ms"] = measured_latency_p90_ms;
  auto &per = j["per_utt"] = nlohmann::ordered_json::array();
  for (const UttTiming &u : per_utt) {
    per.push_back({{"id", u.id},
                   {"audio_s", u.audio_s},
                   {"decode_s", u.DecodeSeconds()},
                   {"rtf", u.Rtf()},
                   {"feature_s", u.feature_s},
                   {"encoder_s", u.encoder_s},
                   {"search_s", u.search_s},
                   {"speaker_encoder_s", u.embed_s}});
  }
  return j;
}

nlohmann::ordered_json PairedRtfReport::ToJson() const {
  return {{"a", a.ToJson()}, {"b", b.ToJson()}, {"ratio", ratio}};
}

std::string PairedRtfReport::ToText() const {
  std::ostringstream os;
  char line[256];
  std::snprintf(line, sizeof(line), "%-12s %8s %10s %10s %10s %10s %10s %12s\n", "model", "rtf",
                "decode_s", "audio_s", "feature_s", "encoder_s", "search_s", "spk_enc_s");
  os << line;
  for (const RtfReport *r : {&a, &b}) {
    std::snprintf(line, sizeof(line), "%-12s %8.4f %10.3f %10.3f %10.3f %10.3f %10.3f %12.3f\n",
                  r->label.c_str(), r->rtf, r->decode_s, r->audio_s, r->feature_s, r->encoder_s,
                  r->search_s, r->embed_s);
    os << line;
  }
  std::snprintf(line, sizeof(line), "decode time ratio %s/%s = %.4f\n", b.label.c_str(),
                a.label.c_str(), ratio);
  os << line;
  std::snprintf(line, sizeof(line),
                "regime %s: avg latency %g ms, look-ahead %d frames, look-back %s frames\n",
                a.regime.c_str(), a.avg_latency_ms, a.lookahead_frames,
                a.lookback_frames < 0 ? "unbounded" : std::to_string(a.lookback_frames).c_str());
  os << line;
  std::snprintf(line, sizeof(line), "measured frame delay %.1f ms mean, %.1f ms p90\n",
                a.measured_latency_mean_ms, a.measured_latency_p90_ms);
  os << line;
  return os.str();
}

namespace {

void CheckComparable(const ModelConfig &x, const ModelConfig &y) {
  const EncoderConfig &e = x.encoder, &f = y.encoder;
  bool same = e.input_dim == f.input_dim && e.subsample_channels == f.subsample_channels &&
              e.model_dim == f.model_dim && e.num_blocks == f.num_blocks &&
              e.num_heads == f.num_heads && e.ffn_dim == f.ffn_dim &&
              e.conv_kernel == f.conv_kernel && x.vocab_size == y.vocab_size &&
              x.embed_dim == y.embed_dim && x.pred_hidden == y.pred_hidden &&
              x.pred_dim == y.pred_dim && x.joint_dim == y.joint_dim;
  if (!same) {
    TSRNNT_ERR_CODE(ErrorCode::kUsage)
        << "benchmark models differ in architecture beyond the fusion setting";
  }
}

struct Timed {
  UttTiming timing;
  std::vector<FrameStamp> stamps;
};

Timed RunOne(const Model &m, const BenchmarkItem &item, const MaskRegime &regime,
             const BenchmarkOptions &opts) {
  Timed out;
  Tensor emb;
  double embed_s = 0.0;
  if (m.Config().TargetSpeaker()) {
    auto start = std::chrono::steady_clock::now();
    emb = EnrollmentEmbedding(m, Fbank(), item.enrollment);
    embed_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  SessionResult r = StreamUtterance(m, m.Config().TargetSpeaker() ? &emb : nullptr, regime,
                                    item.audio, opts.search, opts.push_samples);
  out.timing = r.timing;
  out.timing.id = item.id;
  out.timing.embed_s = embed_s;
  out.stamps = std::move(r.stamps);
  return out;
}

}  // namespace

PairedRtfReport RtfBenchmark(const Model &a, const std::string &label_a, const Model &b,
                             const std::string &label_b, const std::vector<BenchmarkItem> &items,
                             const MaskRegime &regime, const BenchmarkOptions &opts) {
  CheckComparable(a.Config(), b.Config());
  if (items.empty()) TSRNNT_ERR_CODE(ErrorCode::kData) << "benchmark manifest is empty";
  if (opts.repeats < 1 || opts.warmup_utts < 0) {
    TSRNNT_ERR_CODE(ErrorCode::kUsage) << "bad benchmark repeat / warm-up counts";
  }
  for (int32_t w = 0; w < opts.warmup_utts; ++w) {
    RunOne(a, items[w % items.size()], regime, opts);
    RunOne(b, items[w % items.size()], regime, opts);
  }
  std::vector<UttTiming> ta, tb;
  std::vector<FrameStamp> sa, sb;
  for (size_t i = 0; i < items.size(); ++i) {
    UttTiming acc_a, acc_b;
    for (int32_t rep = 0; rep < opts.repeats; ++rep) {
      // alternate the order so drift and cache effects hit both sides
      bool a_first = (i + rep) % 2 == 0;
      Timed x, y;
      if (a_first) {
        x = RunOne(a, items[i], regime, opts);
        y = RunOne(b, items[i], regime, opts);
      } else {
        y = RunOne(b, items[i], regime, opts);
        x = RunOne(a, items[i], regime, opts);
      }
      for (auto [acc, t] : {std::pair{&acc_a, &x}, std::pair{&acc_b, &y}}) {
        acc->id = t->timing.id;
        acc->audio_s += t->timing.audio_s;
        acc->feature_s += t->timing.feature_s;
        acc->encoder_s += t->timing.encoder_s;
        acc->search_s += t->timing.search_s;
        acc->embed_s += t->timing.embed_s;
      }
      if (rep == 0) {
        sa.insert(sa.end(), x.stamps.begin(), x.stamps.end());
        sb.insert(sb.end(), y.stamps.begin(), y.stamps.end());
      }
    }
    ta.push_back(acc_a);
    tb.push_back(acc_b);
  }
  PairedRtfReport rep;
  rep.a = MakeRtfReport(label_a, regime, ta, sa);
  rep.b = MakeRtfReport(label_b, regime, tb, sb);
  rep.ratio = rep.b.decode_s / rep.a.decode_s;
  return rep;
}

}  // namespace tsrnnt
