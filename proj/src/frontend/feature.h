// frontend/feature.h
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

#ifndef TSRNNT_FRONTEND_FEATURE_H_
#define TSRNNT_FRONTEND_FEATURE_H_

#include <cstdint>
#include <span>
#include <vector>

#include "frontend/wave-io.h"
#include "numerics/tensor.h"

namespace tsrnnt {

struct FbankOptions {
  int32_t num_mels = 80;
  float frame_length_ms = 25.0f;
  float frame_shift_ms = 10.0f;
  float preemph_coeff = 0.97f;
  float log_floor = 1e-10f;
  int32_t sample_rate_hz = kSampleRate;

  int32_t WindowSize() const;   // 400 samples by default
  int32_t WindowShift() const;  // 160
  int32_t PaddedWindowSize() const;  // FFT size, 512
};

// T' x num_mels log-mel matrix plus framing metadata.
struct FeatureSeq {
  Tensor frames;
  float frame_shift_ms = 10.0f;
  float frame_length_ms = 25.0f;

  int32_t NumFrames() const { return frames.Empty() ? 0 : frames.NumRows(); }
  int32_t Dim() const { return frames.Empty() ? 0 : frames.NumCols(); }
};

// 1 + floor((num_samples - window) / shift), or 0 when shorter than a window.
int32_t NumFrames(int64_t num_samples, const FbankOptions &opts);

// Log-mel filterbank. Every frame is processed on its own (pre-emphasis,
// Hann window, |FFT|, HTK mel triangles, log), so a streaming caller that
// hands over the same 400 samples gets bit-identical rows.
class Fbank {
 public:
  explicit Fbank(const FbankOptions &opts = {});

  const FbankOptions &Options() const { return opts_; }

  // Throws when the waveform is shorter than one window.
  FeatureSeq Compute(std::span<const float> samples) const;
  FeatureSeq Compute(const Waveform &wave) const { return Compute(wave.samples); }

  // `window` holds exactly WindowSize() samples; writes num_mels values.
  void ComputeFrame(std::span<const float> window, float *out) const;

  // Centre frequency (Hz) of each mel triangle.
  const std::vector<double> &CenterFrequencies() const { return centers_hz_; }

 private:
  struct Bank {
    int32_t first_bin;
    std::vector<float> weights;
  };

  FbankOptions opts_;
  std::vector<double> hann_;
  std::vector<Bank> banks_;
  std::vector<double> centers_hz_;
};

double HzToMel(double hz);
double MelToHz(double mel);

}  // namespace tsrnnt

#endif  // TSRNNT_FRONTEND_FEATURE_H_
