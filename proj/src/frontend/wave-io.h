// frontend/wave-io.h
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

#ifndef TSRNNT_FRONTEND_WAVE_IO_H_
#define TSRNNT_FRONTEND_WAVE_IO_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace tsrnnt {

constexpr int32_t kSampleRate = 16000;

// Mono audio, samples nominally in [-1, 1].
struct Waveform {
  std::vector<float> samples;
  int32_t sample_rate_hz = kSampleRate;

  int64_t NumSamples() const { return static_cast<int64_t>(samples.size()); }
  double DurationSeconds() const {
    return static_cast<double>(samples.size()) / sample_rate_hz;
  }
};

// RIFF/WAVE, PCM 16-bit, mono, 16 kHz only; anything else is rejected with
// ErrorCode::kData. Samples are divided by 32768.
Waveform ReadWave(std::istream &is);
Waveform ReadWave(const std::string &path);

// Writes PCM16. Samples are scaled by 32768, rounded and clipped.
void WriteWave(const Waveform &wave, std::ostream &os);
void WriteWave(const Waveform &wave, const std::string &path);

}  // namespace tsrnnt

#endif  // TSRNNT_FRONTEND_WAVE_IO_H_
