// simulate/toy-corpus.cc
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

#include "simulate/toy-corpus.h"

#include <cmath>

#include "base/error.h"

namespace tsrnnt {

void ToyCorpusConfig::Check() const {
  if (vocab_size < 2) TSRNNT_ERR_CODE(ErrorCode::kUsage) << "toy corpus needs K' >= 2";
  if (vocab_size > 16) {
    TSRNNT_ERR_CODE(ErrorCode::kUsage) << "toy corpus supports at most 16 token patterns";
  }
  if (num_speakers < 2) TSRNNT_ERR_CODE(ErrorCode::kUsage) << "toy corpus needs >= 2 speakers";
  if (utts_per_speaker < 1 || min_tokens < 1 || max_tokens < min_tokens) {
    TSRNNT_ERR_CODE(ErrorCode::kUsage) << "bad toy corpus utterance settings";
  }
  if (!(min_f0_hz > 0 && max_f0_hz >= min_f0_hz && min_formant_hz > 0 &&
        max_formant_hz >= min_formant_hz && formant_width > 0)) {
    TSRNNT_ERR_CODE(ErrorCode::kUsage) << "bad toy corpus voice ranges";
  }
}

std::vector<float> ToyCorpus::TokenLevels(int32_t token) {
  // The first slot is always at full level, which pins the scale: no two
  // patterns are multiples of each other.
  static constexpr float kLevels[4] = {1.0f, 0.55f, 0.2f, 0.0f};
  if (token < 1 || token > 16) TSRNNT_ERR << "bad toy token " << token;
  int32_t p = token - 1;
  return {1.0f, kLevels[p / 4], kLevels[p % 4]};
}

ToyCorpus::ToyCorpus(const ToyCorpusConfig &config) : config_(config) {
  config.Check();
  Rng rng(config.seed);
  Rng voice_rng = rng.Fork(1), text_rng = rng.Fork(2);
  for (int32_t s = 0; s < config.num_speakers; ++s) {
    ToySpeaker spk;
    spk.id = s;
    spk.f0_hz = std::exp(voice_rng.Uniform(std::log(config.min_f0_hz),
                                           std::log(config.max_f0_hz)));
    spk.formant_hz = std::exp(voice_rng.Uniform(std::log(config.min_formant_hz),
                                                std::log(config.max_formant_hz)));
    for (int32_t h = 1; h * spk.f0_hz < 7600.0; ++h) {
      double d = (std::log(h * spk.f0_hz) - std::log(spk.formant_hz)) / config.formant_width;
      spk.harmonic_amps.push_back(std::exp(-0.5 * d * d) + 0.01);
    }
    speakers_.push_back(std::move(spk));
  }
  by_speaker_.resize(config.num_speakers);
  for (int32_t s = 0; s < config.num_speakers; ++s) {
    for (int32_t i = 0; i < config.utts_per_speaker; ++i) {
      ToyUtterance u;
      u.id = static_cast<int32_t>(utts_.size());
      u.speaker = s;
      int32_t n = static_cast<int32_t>(text_rng.UniformInt(config.min_tokens, config.max_tokens));
      for (int32_t k = 0; k < n; ++k) {
        u.tokens.push_back(static_cast<int32_t>(text_rng.UniformInt(1, config.vocab_size)));
      }
      u.lead_samples = text_rng.UniformInt(800, 2400);
      u.trail_samples = text_rng.UniformInt(800, 2400);
      by_speaker_[s].push_back(u.id);
      utts_.push_back(std::move(u));
    }
  }
}

std::vector<float> ToyCorpus::RenderSegment(int32_t speaker, int32_t token) const {
  const ToySpeaker &spk = speakers_.at(speaker);
  std::vector<float> levels = TokenLevels(token);
  // 5 ms raised-cosine ramps between slot levels.
  const int64_t ramp = 80;
  std::vector<double> env(kTokenSamples, 0.0);
  for (int32_t slot = 0; slot < 3; ++slot) {
    int64_t begin = kGapSamples + slot * kSlotSamples;
    for (int64_t i = 0; i < kSlotSamples; ++i) env[begin + i] = levels[slot];
  }
  std::vector<double> smooth(kTokenSamples, 0.0);
  for (int64_t i = 0; i < kTokenSamples; ++i) {
    double acc = 0.0, wsum = 0.0;
    for (int64_t j = -ramp; j <= ramp; ++j) {
      int64_t k = i + j;
      double w = 0.5 + 0.5 * std::cos(M_PI * j / (ramp + 1));
      acc += w * (k >= 0 && k < kTokenSamples ? env[k] : 0.0);
      wsum += w;
    }
    smooth[i] = acc / wsum;
  }
  double norm = 0.0;
  for (double a : spk.harmonic_amps) norm += a * a;
  norm = config_.rms_level * std::sqrt(2.0 / norm);
  std::vector<float> out(kTokenSamples);
  for (int64_t i = 0; i < kTokenSamples; ++i) {
    double v = 0.0;
    for (size_t h = 0; h < spk.harmonic_amps.size(); ++h) {
      v += spk.harmonic_amps[h] *
           std::sin(2.0 * M_PI * (h + 1) * spk.f0_hz * i / kSampleRate);
    }
    out[i] = static_cast<float>(norm * smooth[i] * v);
  }
  return out;
}

Waveform ToyCorpus::Render(const ToyUtterance &utt) const {
  Waveform w;
  w.samples.assign(utt.lead_samples, 0.0f);
  for (int32_t token : utt.tokens) {
    std::vector<float> seg = RenderSegment(utt.speaker, token);
    w.samples.insert(w.samples.end(), seg.begin(), seg.end());
  }
  w.samples.insert(w.samples.end(), utt.trail_samples, 0.0f);
  return w;
}

std::vector<int32_t> ToyCorpus::MatchedFilterDecode(const Waveform &wave,
                                                    int32_t speaker,
                                                    int64_t lead_samples) const {
  std::vector<std::vector<float>> protos;
  for (int32_t k = 1; k <= config_.vocab_size; ++k) protos.push_back(RenderSegment(speaker, k));
  std::vector<int32_t> tokens;
  for (int64_t start = lead_samples; start + kTokenSamples <= wave.NumSamples();
       start += kTokenSamples) {
    double seg_energy = 0.0;
    for (int64_t i = 0; i < kTokenSamples; ++i) {
      seg_energy += static_cast<double>(wave.samples[start + i]) * wave.samples[start + i];
    }
    if (seg_energy == 0.0) break;  // trailing silence
    int32_t best = 0;
    double best_score = -2.0;
    for (int32_t k = 0; k < config_.vocab_size; ++k) {
      double dot = 0.0, pe = 0.0;
      for (int64_t i = 0; i < kTokenSamples; ++i) {
        dot += static_cast<double>(protos[k][i]) * wave.samples[start + i];
        pe += static_cast<double>(protos[k][i]) * protos[k][i];
      }
      double score = dot / std::sqrt(pe * seg_energy);
      if (score > best_score) {
        best_score = score;
        best = k + 1;
      }
    }
    tokens.push_back(best);
  }
  return tokens;
}

}  // namespace tsrnnt
