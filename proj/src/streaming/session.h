// streaming/session.h
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

#ifndef TSRNNT_STREAMING_SESSION_H_
#define TSRNNT_STREAMING_SESSION_H_

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "decoding/search.h"
#include "encoder/streaming-encoder.h"
#include "frontend/feature.h"
#include "transducer/model.h"

namespace tsrnnt {

enum class SearchKind { kGreedy, kAlsd };

struct SearchOptions {
  SearchKind kind = SearchKind::kAlsd;
  GreedyOptions greedy;
  AlsdOptions alsd;
};

// When each encoder frame left the encoder, in samples of audio pushed.
struct FrameStamp {
  int32_t frame = 0;
  int64_t samples_pushed = 0;
  int64_t samples_needed = 0;  // audio the frame depends on
  bool at_finalize = false;
};

// Wall-clock breakdown of one utterance. Seconds, monotonic clock.
struct UttTiming {
  std::string id;
  double audio_s = 0.0;
  double feature_s = 0.0;
  double encoder_s = 0.0;
  double search_s = 0.0;
  double embed_s = 0.0;  // speaker encoder, not part of decode_s
  double DecodeSeconds() const { return feature_s + encoder_s + search_s; }
  double Rtf() const { return DecodeSeconds() / audio_s; }
};

struct SessionResult {
  std::vector<int32_t> tokens;
  NBest nbest;  // empty for greedy
  UttTiming timing;
  Tensor encoder_out;  // every encoder frame, in order
  std::vector<FrameStamp> stamps;
};

// Encoder output of the full utterance with the regime's mask, computed in
// one pass. `embedding` as for Session.
Tensor OfflineEncode(const Model &model, const Tensor &feats, const Tensor *embedding,
                     const MaskRegime &regime);

// Decodes encoder output with the given search.
NBest SearchEncoderOutput(const Model &model, const Tensor &enc, const SearchOptions &opts,
                          std::vector<int32_t> *best);

// [1 x D] speaker embedding of an enrollment recording.
Tensor EnrollmentEmbedding(const Model &model, const Fbank &fbank, const Waveform &enroll);

// Incremental decoding of one utterance. The speaker embedding is computed
// beforehand and handed over at open; the speaker encoder is never run here.
class Session {
 public:
  // `embedding` ([1 x D]) is required iff the model is target-speaker; the
  // session keeps its own copy. `regime` must be causal or chunked.
  Session(const Model *model, const Tensor *embedding, const MaskRegime &regime,
          const SearchOptions &opts = {}, const FbankOptions &fbank_opts = {});
  Session(const Session &) = delete;
  Session &operator=(const Session &) = delete;

  // Mono 16 kHz samples. Returns tokens emitted by this push; emitted tokens
  // are never retracted.
  std::vector<int32_t> PushAudio(std::span<const float> samples);

  // Flushes the encoder (zero padding at the right edge), completes the
  // search and closes the session. The trailing partial analysis window is
  // dropped, as in batch feature extraction.
  SessionResult Finalize();

  bool Closed() const { return closed_; }
  const std::vector<int32_t> &Emitted() const { return emitted_; }
  int32_t NumEncoderFrames() const { return scorer_.NumFrames(); }
  StreamingEncoder *MutableEncoder() { return &encoder_; }

 private:
  void ConsumeEncoderFrames(const Tensor &frames, bool at_finalize);
  std::vector<int32_t> EmitNew();
  int64_t SamplesNeeded(int32_t frame) const;

  const Model *model_;
  EncoderConfig cfg_;
  Tensor embedding_;
  SearchOptions opts_;
  Fbank fbank_;
  StreamingEncoder encoder_;
  ModelScorer scorer_;
  std::unique_ptr<GreedySearch> greedy_;
  std::unique_ptr<AlsdSearch> alsd_;

  std::vector<float> pending_audio_;  // samples not yet fully framed
  int64_t audio_base_ = 0;  // global index of pending_audio_[0]
  int64_t samples_pushed_ = 0;
  int32_t feats_done_ = 0;
  std::vector<int32_t> emitted_;
  std::vector<Tensor> enc_rows_;
  std::vector<FrameStamp> stamps_;
  UttTiming timing_;
  bool closed_ = false;
};

}  // namespace tsrnnt

#endif  // TSRNNT_STREAMING_SESSION_H_
