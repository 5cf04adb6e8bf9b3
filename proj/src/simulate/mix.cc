// simulate/mix.cc
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

#include "simulate/mix.h"

#include <cmath>

#include "base/error.h"

namespace tsrnnt {

namespace {

// Repeats or truncates `src` to `n` samples.
std::vector<float> Loop(const std::vector<float> &src, int64_t n) {
  if (src.empty()) TSRNNT_ERR_CODE(ErrorCode::kData) << "cannot loop an empty waveform";
  std::vector<float> out(n);
  for (int64_t i = 0; i < n; ++i) out[i] = src[i % src.size()];
  return out;
}

}  // namespace

double MeanPower(std::span<const float> x) {
  if (x.empty()) return 0.0;
  double sum = 0.0;
  for (float v : x) sum += static_cast<double>(v) * v;
  return sum / static_cast<double>(x.size());
}

double PowerRatioDb(std::span<const float> a, std::span<const float> b) {
  return 10.0 * std::log10(MeanPower(a) / MeanPower(b));
}

MixResult Mix(const Waveform &target, const Waveform *interferer,
              const Waveform *noise, double sir_db, double snr_db,
              double overlap, Rng *rng) {
  const int64_t len = target.NumSamples();
  const double p_target = MeanPower(target.samples);
  if (len == 0 || p_target == 0.0) {
    TSRNNT_ERR_CODE(ErrorCode::kData) << "Mix: target has zero power";
  }
  if (overlap <= 0.0 || overlap > 1.0) {
    TSRNNT_ERR_CODE(ErrorCode::kUsage) << "Mix: overlap must be in (0, 1], got " << overlap;
  }
  MixResult r;
  r.target = target.samples;
  r.interferer.assign(len, 0.0f);
  r.noise.assign(len, 0.0f);

  if (interferer != nullptr) {
    int64_t n = std::max<int64_t>(1, std::llround(overlap * len));
    std::vector<float> seg = Loop(interferer->samples, n);
    r.interferer_offset = static_cast<int64_t>(rng->UniformInt(0, len - n));
    for (int64_t i = 0; i < n; ++i) r.interferer[r.interferer_offset + i] = seg[i];
    double p = MeanPower(r.interferer);
    if (p == 0.0) TSRNNT_ERR_CODE(ErrorCode::kData) << "Mix: interferer has zero power";
    r.interferer_scale = std::sqrt(p_target / (p * std::pow(10.0, sir_db / 10.0)));
    for (float &v : r.interferer) v = static_cast<float>(v * r.interferer_scale);
    r.overlap = static_cast<double>(n) / len;
    r.sir_db = sir_db;
  }
  if (noise != nullptr) {
    r.noise = Loop(noise->samples, len);
    double p = MeanPower(r.noise);
    if (p == 0.0) TSRNNT_ERR_CODE(ErrorCode::kData) << "Mix: noise has zero power";
    r.noise_scale = std::sqrt(p_target / (p * std::pow(10.0, snr_db / 10.0)));
    for (float &v : r.noise) v = static_cast<float>(v * r.noise_scale);
    r.snr_db = snr_db;
  }
  r.mixture.samples.resize(len);
  for (int64_t i = 0; i < len; ++i) {
    r.mixture.samples[i] = r.target[i] + r.interferer[i] + r.noise[i];
  }
  return r;
}

double Sdr(std::span<const float> reference, std::span<const float> estimate) {
  if (reference.size() != estimate.size()) {
    TSRNNT_ERR_CODE(ErrorCode::kData) << "Sdr: length mismatch " << reference.size()
                                      << " vs " << estimate.size();
  }
  double signal = 0.0, residual = 0.0;
  for (size_t i = 0; i < reference.size(); ++i) {
    double s = reference[i], d = s - estimate[i];
    signal += s * s;
    residual += d * d;
  }
  if (signal == 0.0) TSRNNT_ERR_CODE(ErrorCode::kData) << "Sdr: zero reference";
  if (residual < 1e-12 * signal) return kSdrCapDb;
  return std::min(kSdrCapDb, 10.0 * std::log10(signal / residual));
}

Waveform LowPassNoise(int64_t num_samples, Rng *rng) {
  Waveform w;
  w.samples.resize(num_samples);
  double y = 0.0;
  for (int64_t i = 0; i < num_samples; ++i) {
    y = 0.9 * y + rng->Normal();
    w.samples[i] = static_cast<float>(y);
  }
  double p = MeanPower(w.samples);
  if (p > 0.0) {
    float g = static_cast<float>(1.0 / std::sqrt(p));
    for (float &v : w.samples) v *= g;
  }
  return w;
}

}  // namespace tsrnnt
