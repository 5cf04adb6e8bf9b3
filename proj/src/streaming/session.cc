// streaming/session.cc
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

#include "streaming/session.h"

#include <algorithm>
#include <chrono>

#include "base/error.h"

namespace tsrnnt {

namespace {

using Clock = std::chrono::steady_clock;

double Since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

EncoderConfig WithRegime(const EncoderConfig &cfg, const MaskRegime &regime) {
  EncoderConfig out = cfg;
  out.regime = regime;
  return out;
}

}  // namespace

Tensor OfflineEncode(const Model &model, const Tensor &feats, const Tensor *embedding,
                     const MaskRegime &regime) {
  Tape tape(false);
  Var e;
  if (embedding != nullptr) e = tape.Constant(*embedding);
  return Encode(tape, model.Params(), "enc.", WithRegime(model.Config().encoder, regime),
                NormalizeFeatures(model.Params(), feats), embedding ? &e : nullptr)
      .Value();
}

NBest SearchEncoderOutput(const Model &model, const Tensor &enc, const SearchOptions &opts,
                          std::vector<int32_t> *best) {
  ModelScorer scorer(&model);
  scorer.AppendFrames(enc);
  if (opts.kind == SearchKind::kGreedy) {
    *best = GreedyDecode(&scorer, opts.greedy);
    return {};
  }
  NBest n = AlsdBeamSearch(&scorer, opts.alsd);
  best->clear();
  if (!n.empty()) *best = n[0].tokens;
  return n;
}

Tensor EnrollmentEmbedding(const Model &model, const Fbank &fbank, const Waveform &enroll) {
  Tape tape(false);
  return model.SpeakerEmbedding(tape, fbank.Compute(enroll).frames).Value();
}

Session::Session(const Model *model, const Tensor *embedding, const MaskRegime &regime,
                 const SearchOptions &opts, const FbankOptions &fbank_opts)
    : model_(model),
      cfg_(WithRegime(model->Config().encoder, regime)),
      embedding_(embedding ? *embedding : Tensor()),
      opts_(opts),
      fbank_(fbank_opts),
      encoder_(&model->Params(), "enc.", cfg_, embedding ? &embedding_ : nullptr),
      scorer_(model) {
  if (fbank_opts.num_mels != cfg_.input_dim) {
    TSRNNT_ERR_CODE(ErrorCode::kShape) << "feature dim " << fbank_opts.num_mels
                                       << " does not match model input " << cfg_.input_dim;
  }
  if (opts.kind == SearchKind::kGreedy) {
    greedy_ = std::make_unique<GreedySearch>(&scorer_, opts.greedy);
  } else {
    alsd_ = std::make_unique<AlsdSearch>(&scorer_, opts.alsd);
  }
}

int64_t Session::SamplesNeeded(int32_t frame) const {
  int32_t last = frame;
  if (cfg_.regime.kind == MaskRegime::Kind::kChunked) {
    last = (frame / cfg_.regime.chunk + 1) * cfg_.regime.chunk - 1;
  }
  int64_t feat = 4 * static_cast<int64_t>(last) + 6;
  return feat * fbank_.Options().WindowShift() + fbank_.Options().WindowSize();
}

void Session::ConsumeEncoderFrames(const Tensor &frames, bool at_finalize) {
  if (frames.Empty() || frames.NumRows() == 0) return;
  for (int32_t r = 0; r < frames.NumRows(); ++r) {
    int32_t s = static_cast<int32_t>(enc_rows_.size());
    Tensor row = Tensor::Matrix(1, frames.NumCols());
    std::copy(frames.Row(r).begin(), frames.Row(r).end(), row.Values().begin());
    enc_rows_.push_back(std::move(row));
    stamps_.push_back({s, samples_pushed_, SamplesNeeded(s), at_finalize});
  }
  auto start = Clock::now();
  scorer_.AppendFrames(frames);
  if (greedy_) {
    greedy_->Advance();
  } else if (!at_finalize) {
    alsd_->Advance();
  }
  timing_.search_s += Since(start);
}

std::vector<int32_t> Session::EmitNew() {
  std::vector<int32_t> now = greedy_ ? greedy_->Tokens() : alsd_->CommittedPrefix();
  std::vector<int32_t> fresh(now.begin() + std::min(now.size(), emitted_.size()), now.end());
  if (now.size() > emitted_.size()) emitted_ = std::move(now);
  return fresh;
}

std::vector<int32_t> Session::PushAudio(std::span<const float> samples) {
  if (closed_) TSRNNT_ERR_CODE(ErrorCode::kUsage) << "push to a closed session";
  samples_pushed_ += samples.size();
  timing_.audio_s += static_cast<double>(samples.size()) / fbank_.Options().sample_rate_hz;
  auto start = Clock::now();
  pending_audio_.insert(pending_audio_.end(), samples.begin(), samples.end());
  const int32_t shift = fbank_.Options().WindowShift(), size = fbank_.Options().WindowSize();
  int32_t ready = NumFrames(samples_pushed_, fbank_.Options()) - feats_done_;
  Tensor feats;
  if (ready > 0) {
    feats = Tensor::Matrix(ready, fbank_.Options().num_mels);
    for (int32_t i = 0; i < ready; ++i) {
      int64_t begin = static_cast<int64_t>(feats_done_ + i) * shift - audio_base_;
      fbank_.ComputeFrame(std::span<const float>(pending_audio_).subspan(begin, size),
                          feats.Row(i).data());
    }
    feats_done_ += ready;
    int64_t keep_from = static_cast<int64_t>(feats_done_) * shift - audio_base_;
    pending_audio_.erase(pending_audio_.begin(), pending_audio_.begin() + keep_from);
    audio_base_ += keep_from;
  }
  timing_.feature_s += Since(start);
  if (ready > 0) {
    start = Clock::now();
    Tensor frames = encoder_.Accept(NormalizeFeatures(model_->Params(), feats));
    timing_.encoder_s += Since(start);
    ConsumeEncoderFrames(frames, false);
  }
  return EmitNew();
}

SessionResult Session::Finalize() {
  if (closed_) TSRNNT_ERR_CODE(ErrorCode::kUsage) << "session already finalized";
  closed_ = true;
  if (feats_done_ == 0) {
    TSRNNT_ERR_CODE(ErrorCode::kData) << "session received no complete analysis window; "
                                      << "nothing to decode";
  }
  auto start = Clock::now();
  Tensor frames = encoder_.Finalize();
  timing_.encoder_s += Since(start);
  ConsumeEncoderFrames(frames, true);
  SessionResult res;
  start = Clock::now();
  if (greedy_) {
    res.tokens = greedy_->Tokens();
  } else {
    res.nbest = alsd_->Finalize();
    if (!res.nbest.empty()) res.tokens = res.nbest[0].tokens;
  }
  timing_.search_s += Since(start);
  if (!std::equal(emitted_.begin(), emitted_.end(), res.tokens.begin(),
                  res.tokens.begin() + std::min(res.tokens.size(), emitted_.size())) ||
      res.tokens.size() < emitted_.size()) {
    TSRNNT_ERR << "final transcript does not extend the emitted prefix";
  }
  emitted_ = res.tokens;
  res.timing = timing_;
  const int32_t n = static_cast<int32_t>(enc_rows_.size());
  res.encoder_out = Tensor::Matrix(n, cfg_.model_dim);
  for (int32_t r = 0; r < n; ++r) {
    std::copy(enc_rows_[r].Values().begin(), enc_rows_[r].Values().end(),
              res.encoder_out.Row(r).begin());
  }
  res.stamps = stamps_;
  return res;
}

}  // namespace tsrnnt
