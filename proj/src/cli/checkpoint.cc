// cli/checkpoint.cc
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

#include "cli/checkpoint.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>

#include "base/error.h"

namespace tsrnnt {

static_assert(std::endian::native == std::endian::little,
              "checkpoint I/O assumes a little-endian host");

namespace {

template <typename T>
void Put(std::ostream &os, T v) {
  os.write(reinterpret_cast<const char *>(&v), sizeof(T));
}

void PutString(std::ostream &os, const std::string &s) {
  Put<uint32_t>(os, static_cast<uint32_t>(s.size()));
  os.write(s.data(), s.size());
}

void ReadBytes(std::istream &is, void *dst, size_t n, const char *what) {
  is.read(static_cast<char *>(dst), n);
  if (static_cast<size_t>(is.gcount()) != n) {
    TSRNNT_ERR_CODE(ErrorCode::kTruncated) << "checkpoint truncated while reading " << what;
  }
}

template <typename T>
T Take(std::istream &is, const char *what) {
  T v;
  ReadBytes(is, &v, sizeof(T), what);
  return v;
}

std::string TakeString(std::istream &is, const char *what) {
  uint32_t n = Take<uint32_t>(is, what);
  if (n > (1u << 24)) TSRNNT_ERR_CODE(ErrorCode::kTruncated) << "implausible " << what << " length";
  std::string s(n, '\0');
  ReadBytes(is, s.data(), n, what);
  return s;
}

bool IsFeatureStat(const std::string &name) { return name.rfind("feat.", 0) == 0; }

}  // namespace

void SaveCheckpoint(const Checkpoint &ckpt, std::ostream &os) {
  os.write(kCheckpointMagic, sizeof(kCheckpointMagic));
  Put<uint32_t>(os, kCheckpointVersion);
  PutString(os, ckpt.model.Config().ToKeyValues().ToString());
  Put<uint64_t>(os, ckpt.step);
  Put<uint64_t>(os, ckpt.seed);
  const auto &params = ckpt.model.Params().Map();
  Put<uint32_t>(os, static_cast<uint32_t>(params.size()));
  for (const auto &[name, t] : params) {
    PutString(os, name);
    Put<uint32_t>(os, static_cast<uint32_t>(t.Rank()));
    for (int32_t d : t.Shape()) Put<int32_t>(os, d);
    os.write(reinterpret_cast<const char *>(t.Data()), t.NumElements() * sizeof(float));
  }
  if (!os) TSRNNT_ERR << "failed writing checkpoint";
}

void SaveCheckpoint(const Checkpoint &ckpt, const std::string &path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) TSRNNT_ERR << "cannot write " << path;
  SaveCheckpoint(ckpt, os);
}

Checkpoint LoadCheckpoint(std::istream &is) {
  char magic[sizeof(kCheckpointMagic)] = {};
  is.read(magic, sizeof(magic));
  if (is.gcount() != sizeof(magic) || std::memcmp(magic, kCheckpointMagic, sizeof(magic)) != 0) {
    TSRNNT_ERR_CODE(ErrorCode::kNotACheckpoint) << "not a checkpoint (bad magic)";
  }
  uint32_t version = Take<uint32_t>(is, "version");
  if (version != kCheckpointVersion) {
    TSRNNT_ERR_CODE(ErrorCode::kVersionMismatch)
        << "checkpoint version " << version << ", this build reads " << kCheckpointVersion;
  }
  ModelConfig config = ModelConfig::FromKeyValues(KeyValues::ParseString(TakeString(is, "config")));
  Checkpoint ckpt;
  ckpt.step = Take<uint64_t>(is, "step");
  ckpt.seed = Take<uint64_t>(is, "seed");
  ckpt.model = Model(config, ckpt.seed);
  auto &params = ckpt.model.MutableParams().MutableMap();
  uint32_t n = Take<uint32_t>(is, "tensor count");
  std::set<std::string> seen;
  for (uint32_t i = 0; i < n; ++i) {
    std::string name = TakeString(is, "tensor name");
    uint32_t rank = Take<uint32_t>(is, "tensor rank");
    if (rank > 4) TSRNNT_ERR_CODE(ErrorCode::kTruncated) << "implausible rank for " << name;
    std::vector<int32_t> shape(rank);
    int64_t count = 1;
    for (auto &d : shape) {
      d = Take<int32_t>(is, "tensor shape");
      if (d < 0) TSRNNT_ERR_CODE(ErrorCode::kTruncated) << "negative dimension for " << name;
      count *= d;
    }
    auto it = params.find(name);
    if (it == params.end() && !IsFeatureStat(name)) {
      TSRNNT_ERR_CODE(ErrorCode::kShapeMismatch) << "unexpected tensor " << name;
    }
    if (it != params.end() && it->second.Shape() != shape) {
      TSRNNT_ERR_CODE(ErrorCode::kShapeMismatch)
          << "shape mismatch for tensor " << name << ": file " << Tensor(shape).ShapeString()
          << ", config " << it->second.ShapeString();
    }
    if (count > (int64_t(1) << 31)) TSRNNT_ERR_CODE(ErrorCode::kTruncated) << "tensor too large";
    std::vector<float> data(count);
    ReadBytes(is, data.data(), count * sizeof(float), name.c_str());
    params[name] = Tensor(shape, std::move(data));
    seen.insert(name);
  }
  for (const auto &[name, t] : params) {
    if (!seen.count(name)) {
      TSRNNT_ERR_CODE(ErrorCode::kShapeMismatch) << "checkpoint lacks tensor " << name;
    }
  }
  return ckpt;
}

Checkpoint LoadCheckpoint(const std::string &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) TSRNNT_ERR_CODE(ErrorCode::kData) << "cannot open checkpoint " << path;
  return LoadCheckpoint(is);
}

}  // namespace tsrnnt
