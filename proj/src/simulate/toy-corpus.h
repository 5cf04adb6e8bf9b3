// simulate/toy-corpus.h
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

#ifndef TSRNNT_SIMULATE_TOY_CORPUS_H_
#define TSRNNT_SIMULATE_TOY_CORPUS_H_

#include <cstdint>
#include <vector>

#include "frontend/wave-io.h"
#include "numerics/rng.h"

namespace tsrnnt {

struct ToyCorpusConfig {
  int32_t num_speakers = 60;
  int32_t utts_per_speaker = 24;
  int32_t vocab_size = 16;  // K', token ids 1..K'
  int32_t min_tokens = 3;
  int32_t max_tokens = 8;
  // Speaker voice ranges, sampled log-uniformly.
  double min_f0_hz = 90.0;
  double max_f0_hz = 260.0;
  double min_formant_hz = 300.0;
  double max_formant_hz = 3600.0;
  // Width of the spectral envelope peak, in natural-log frequency units.
  double formant_width = 0.28;
  double rms_level = 0.05;
  uint64_t seed = 1;

  void Check() const;  // throws on K' < 2, fewer than 2 speakers, ...
};

struct ToySpeaker {
  int32_t id = 0;
  double f0_hz = 0.0;
  double formant_hz = 0.0;
  std::vector<double> harmonic_amps;  // harmonic h+1 at amplitude [h]
};

struct ToyUtterance {
  int32_t id = 0;
  int32_t speaker = 0;
  std::vector<int32_t> tokens;  // 1..K'
  int64_t lead_samples = 0;
  int64_t trail_samples = 0;
};

// A synthetic corpus. A speaker is a fundamental frequency plus a harmonic
// amplitude envelope peaked around a "formant" frequency. A token is a fixed
// 100 ms amplitude pattern (10 ms gap, a full-level 30 ms slot, then two
// 30 ms slots at one of four levels), rendered with the speaker's harmonics and restarted phase,
// so the same (speaker, token) pair always yields the same samples.
class ToyCorpus {
 public:
  static constexpr int64_t kTokenSamples = 1600;  // 100 ms
  static constexpr int64_t kGapSamples = 160;
  static constexpr int64_t kSlotSamples = 480;

  explicit ToyCorpus(const ToyCorpusConfig &config);

  const ToyCorpusConfig &Config() const { return config_; }
  const std::vector<ToySpeaker> &Speakers() const { return speakers_; }
  const std::vector<ToyUtterance> &Utterances() const { return utts_; }
  const ToyUtterance &Utterance(int32_t id) const { return utts_.at(id); }
  // Utterance ids of speaker `s`, in order.
  const std::vector<int32_t> &UtterancesOf(int32_t s) const {
    return by_speaker_.at(s);
  }

  // Slot levels of a token, e.g. {1, 0.55, 0}.
  static std::vector<float> TokenLevels(int32_t token);

  std::vector<float> RenderSegment(int32_t speaker, int32_t token) const;
  Waveform Render(const ToyUtterance &utt) const;
  Waveform Render(int32_t utt_id) const { return Render(Utterance(utt_id)); }

  // Decodes a clean rendering of `speaker` whose first token starts at
  // `lead_samples`, by normalised correlation against the K' prototype
  // segments at each 100 ms step.
  std::vector<int32_t> MatchedFilterDecode(const Waveform &wave,
                                           int32_t speaker,
                                           int64_t lead_samples) const;

 private:
  ToyCorpusConfig config_;
  std::vector<ToySpeaker> speakers_;
  std::vector<ToyUtterance> utts_;
  std::vector<std::vector<int32_t>> by_speaker_;
};

}  // namespace tsrnnt

#endif  // TSRNNT_SIMULATE_TOY_CORPUS_H_
