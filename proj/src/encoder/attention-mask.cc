// encoder/attention-mask.cc
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

#include "encoder/attention-mask.h"

#include <cmath>

#include "base/error.h"

namespace tsrnnt {

namespace {

int32_t ParseCount(const std::string &s, const std::string &whole) {
  try {
    size_t pos = 0;
    if (s.size() > 2 && s.substr(s.size() - 2) == "ms") {
      double ms = std::stod(s.substr(0, s.size() - 2), &pos);
      double frames = ms / kEncoderFrameMs;
      if (pos == s.size() - 2 && frames == std::floor(frames) && frames >= 0) {
        return static_cast<int32_t>(frames);
      }
    } else {
      int v = std::stoi(s, &pos);
      if (pos == s.size()) return v;
    }
  } catch (const std::exception &) {
  }
  TSRNNT_ERR_CODE(ErrorCode::kUsage)
      << "bad mask regime '" << whole << "' (sizes are encoder frames or a "
      << "multiple of 40ms)";
}

int32_t ChunkOf(int32_t frame, int32_t chunk) { return frame / chunk; }

}  // namespace

MaskRegime MaskRegime::Chunked(int32_t chunk, int32_t left) {
  if (chunk < 1) TSRNNT_ERR_CODE(ErrorCode::kUsage) << "chunk size must be >= 1, got " << chunk;
  return {Kind::kChunked, chunk, left};
}

MaskRegime MaskRegime::Parse(const std::string &text) {
  std::vector<std::string> parts;
  size_t start = 0;
  while (true) {
    size_t p = text.find(':', start);
    parts.push_back(text.substr(start, p == std::string::npos ? std::string::npos : p - start));
    if (p == std::string::npos) break;
    start = p + 1;
  }
  int32_t left = -1;
  auto parse_left = [&](const std::string &s) {
    if (s.rfind("left=", 0) != 0) {
      TSRNNT_ERR_CODE(ErrorCode::kUsage) << "bad mask regime '" << text << "'";
    }
    std::string v = s.substr(5);
    left = (v == "inf") ? -1 : ParseCount(v, text);
  };
  if (parts[0] == "offline" && parts.size() == 1) return Offline();
  if (parts[0] == "causal" && parts.size() <= 2) {
    if (parts.size() == 2) parse_left(parts[1]);
    return Causal(left);
  }
  if (parts[0] == "chunked" && (parts.size() == 2 || parts.size() == 3)) {
    int32_t chunk = ParseCount(parts[1], text);
    if (parts.size() == 3) parse_left(parts[2]);
    return Chunked(chunk, left);
  }
  TSRNNT_ERR_CODE(ErrorCode::kUsage)
      << "bad mask regime '" << text << "'; expected offline, causal[:left=N] or "
      << "chunked:C[:left=N]";
}

std::string MaskRegime::ToString() const {
  std::string left_part = left < 0 ? "" : ":left=" + std::to_string(left);
  switch (kind) {
    case Kind::kOffline:
      return "offline";
    case Kind::kCausal:
      return "causal" + left_part;
    case Kind::kChunked:
      return "chunked:" + std::to_string(chunk) + left_part;
  }
  return "";
}

bool AttentionAllowed(const MaskRegime &regime, int32_t query, int32_t key) {
  switch (regime.kind) {
    case MaskRegime::Kind::kOffline:
      return true;
    case MaskRegime::Kind::kCausal:
      return key <= query && (regime.left < 0 || key >= query - regime.left);
    case MaskRegime::Kind::kChunked: {
      int32_t qc = ChunkOf(query, regime.chunk), kc = ChunkOf(key, regime.chunk);
      if (kc > qc) return false;
      if (regime.left < 0) return true;
      int32_t left_chunks = (regime.left + regime.chunk - 1) / regime.chunk;
      return kc >= qc - left_chunks;
    }
  }
  return false;
}

BoolMatrix AttentionMaskBlock(const MaskRegime &regime, int32_t q0, int32_t nq,
                              int32_t k0, int32_t nk) {
  BoolMatrix m(nq, nk);
  for (int32_t i = 0; i < nq; ++i) {
    for (int32_t j = 0; j < nk; ++j) m.Set(i, j, AttentionAllowed(regime, q0 + i, k0 + j));
  }
  return m;
}

BoolMatrix BuildAttentionMask(const MaskRegime &regime, int32_t num_frames) {
  if (num_frames < 1) TSRNNT_ERR_CODE(ErrorCode::kShape) << "attention mask needs T >= 1";
  if (regime.kind == MaskRegime::Kind::kChunked && regime.chunk < 1) {
    TSRNNT_ERR_CODE(ErrorCode::kUsage) << "chunk size must be >= 1";
  }
  return AttentionMaskBlock(regime, 0, num_frames, 0, num_frames);
}

int32_t OldestKeyNeeded(const MaskRegime &regime, int32_t query) {
  if (regime.left < 0 || regime.kind == MaskRegime::Kind::kOffline) return 0;
  if (regime.kind == MaskRegime::Kind::kCausal) return std::max(0, query - regime.left);
  int32_t left_chunks = (regime.left + regime.chunk - 1) / regime.chunk;
  return std::max(0, (ChunkOf(query, regime.chunk) - left_chunks) * regime.chunk);
}

double AverageLatencyMs(const MaskRegime &regime) {
  switch (regime.kind) {
    case MaskRegime::Kind::kCausal:
      return kLookaheadMs;
    case MaskRegime::Kind::kChunked:
      return regime.chunk * kEncoderFrameMs / 2.0 + kLookaheadMs;
    default:
      TSRNNT_ERR_CODE(ErrorCode::kUsage) << "latency is undefined for the offline regime";
  }
}

int32_t LookaheadFeatureFrames(const MaskRegime &regime) {
  switch (regime.kind) {
    case MaskRegime::Kind::kCausal:
      return kLookaheadFeatureFrames;
    case MaskRegime::Kind::kChunked:
      return regime.chunk * kSubsampling - 1 + kLookaheadFeatureFrames;
    default:
      return -1;
  }
}

int32_t LookbackFeatureFrames(const MaskRegime &regime) {
  if (regime.left < 0) return -1;
  if (regime.kind == MaskRegime::Kind::kChunked) {
    int32_t left_chunks = (regime.left + regime.chunk - 1) / regime.chunk;
    return left_chunks * regime.chunk * kSubsampling;
  }
  return regime.left * kSubsampling;
}

}  // namespace tsrnnt
