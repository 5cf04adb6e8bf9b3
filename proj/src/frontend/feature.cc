// frontend/feature.cc
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

#include "frontend/feature.h"

#include <cmath>
#include <complex>

#include "base/error.h"
#include "frontend/fft.h"

namespace tsrnnt {

double HzToMel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double MelToHz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

int32_t FbankOptions::WindowSize() const {
  return static_cast<int32_t>(sample_rate_hz * 0.001 * frame_length_ms + 0.5);
}

int32_t FbankOptions::WindowShift() const {
  return static_cast<int32_t>(sample_rate_hz * 0.001 * frame_shift_ms + 0.5);
}

int32_t FbankOptions::PaddedWindowSize() const {
  return RoundUpToPowerOfTwo(WindowSize());
}

int32_t NumFrames(int64_t num_samples, const FbankOptions &opts) {
  int64_t window = opts.WindowSize();
  if (num_samples < window) return 0;
  return static_cast<int32_t>(1 + (num_samples - window) / opts.WindowShift());
}

Fbank::Fbank(const FbankOptions &opts) : opts_(opts) {
  if (opts.num_mels < 1) TSRNNT_ERR << "num_mels must be positive";
  if (opts.WindowSize() < 2 || opts.WindowShift() < 1) {
    TSRNNT_ERR << "bad framing " << opts.frame_length_ms << "ms/"
               << opts.frame_shift_ms << "ms";
  }
  const int32_t window = opts.WindowSize();
  hann_.resize(window);
  for (int32_t i = 0; i < window; ++i) {
    hann_[i] = 0.5 - 0.5 * std::cos(2.0 * M_PI * i / (window - 1));
  }

  const int32_t fft_size = opts.PaddedWindowSize();
  const int32_t num_bins = fft_size / 2 + 1;
  const double nyquist = 0.5 * opts.sample_rate_hz;
  const double mel_high = HzToMel(nyquist);
  const double mel_step = mel_high / (opts.num_mels + 1);
  banks_.resize(opts.num_mels);
  centers_hz_.resize(opts.num_mels);
  for (int32_t m = 0; m < opts.num_mels; ++m) {
    double left = m * mel_step, center = (m + 1) * mel_step,
           right = (m + 2) * mel_step;
    centers_hz_[m] = MelToHz(center);
    Bank &bank = banks_[m];
    bank.first_bin = -1;
    for (int32_t k = 0; k < num_bins; ++k) {
      double mel = HzToMel(static_cast<double>(k) * opts.sample_rate_hz / fft_size);
      double w = 0.0;
      if (mel > left && mel < right) {
        w = mel <= center ? (mel - left) / (center - left)
                          : (right - mel) / (right - center);
      }
      if (w > 0.0) {
        if (bank.first_bin < 0) bank.first_bin = k;
        bank.weights.resize(k - bank.first_bin + 1, 0.0f);
        bank.weights[k - bank.first_bin] = static_cast<float>(w);
      }
    }
    if (bank.first_bin < 0) bank.first_bin = 0;  // empty triangle
  }
}

void Fbank::ComputeFrame(std::span<const float> window, float *out) const {
  const int32_t size = opts_.WindowSize();
  if (static_cast<int32_t>(window.size()) != size) {
    TSRNNT_ERR << "ComputeFrame expects " << size << " samples, got "
               << window.size();
  }
  const int32_t fft_size = opts_.PaddedWindowSize();
  std::vector<std::complex<double>> buf(fft_size);
  // Pre-emphasis inside the frame; the first sample is treated as its own
  // predecessor.
  for (int32_t i = size - 1; i >= 0; --i) {
    double prev = window[i > 0 ? i - 1 : 0];
    buf[i] = (window[i] - opts_.preemph_coeff * prev) * hann_[i];
  }
  Fft(&buf);
  const int32_t num_bins = fft_size / 2 + 1;
  std::vector<double> mag(num_bins);
  for (int32_t k = 0; k < num_bins; ++k) mag[k] = std::abs(buf[k]);
  for (size_t m = 0; m < banks_.size(); ++m) {
    const Bank &bank = banks_[m];
    double energy = 0.0;
    for (size_t j = 0; j < bank.weights.size(); ++j) {
      energy += bank.weights[j] * mag[bank.first_bin + j];
    }
    out[m] = static_cast<float>(std::log(std::max(energy, double(opts_.log_floor))));
  }
}

FeatureSeq Fbank::Compute(std::span<const float> samples) const {
  int32_t num_frames = NumFrames(samples.size(), opts_);
  if (num_frames == 0) {
    TSRNNT_ERR_CODE(ErrorCode::kData)
        << "waveform of " << samples.size()
        << " samples is shorter than one window (" << opts_.WindowSize() << ")";
  }
  FeatureSeq feats;
  feats.frame_shift_ms = opts_.frame_shift_ms;
  feats.frame_length_ms = opts_.frame_length_ms;
  feats.frames = Tensor::Matrix(num_frames, opts_.num_mels);
  const int32_t shift = opts_.WindowShift(), size = opts_.WindowSize();
  for (int32_t t = 0; t < num_frames; ++t) {
    ComputeFrame(samples.subspan(static_cast<size_t>(t) * shift, size),
                 feats.frames.Row(t).data());
  }
  return feats;
}

}  // namespace tsrnnt
