// simulate/mix.h
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

#ifndef TSRNNT_SIMULATE_MIX_H_
#define TSRNNT_SIMULATE_MIX_H_

#include <cstdint>
#include <span>
#include <vector>

#include "frontend/wave-io.h"
#include "numerics/rng.h"

namespace tsrnnt {

// Components of one mixture, all at the target's length and already scaled,
// so mixture[i] == target[i] + interferer[i] + noise[i] up to float rounding.
struct MixResult {
  Waveform mixture;
  std::vector<float> target;
  std::vector<float> interferer;  // zeros when mixed without an interferer
  std::vector<float> noise;       // zeros when mixed without noise
  double interferer_scale = 0.0;
  double noise_scale = 0.0;
  int64_t interferer_offset = 0;
  double overlap = 0.0;  // fraction of target samples the interferer covers
  double sir_db = 0.0;
  double snr_db = 0.0;
};

// Mixes target + interferer + noise. Powers are mean squares over the full
// target length. The interferer is looped or truncated to
// round(overlap * len) samples and placed at a uniformly random offset; the
// noise is looped or truncated to the target length. Pass null to leave a
// component out (its dB value is then ignored). Throws when a component that
// must be scaled has zero power.
MixResult Mix(const Waveform &target, const Waveform *interferer,
              const Waveform *noise, double sir_db, double snr_db,
              double overlap, Rng *rng);

// Mean square in double precision.
double MeanPower(std::span<const float> x);

// 10 log10(P_a / P_b), both over the full length.
double PowerRatioDb(std::span<const float> a, std::span<const float> b);

// 10 log10(|s|^2 / |s - e|^2), capped at kSdrCapDb when the residual power is
// below 1e-12 |s|^2. Throws on a zero reference or length mismatch.
constexpr double kSdrCapDb = 60.0;
double Sdr(std::span<const float> reference, std::span<const float> estimate);

// Seeded white Gaussian noise through a one-pole low-pass (pole 0.9),
// normalised to unit power.
Waveform LowPassNoise(int64_t num_samples, Rng *rng);

}  // namespace tsrnnt

#endif  // TSRNNT_SIMULATE_MIX_H_
