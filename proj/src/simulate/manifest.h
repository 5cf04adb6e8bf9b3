// simulate/manifest.h
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

#ifndef TSRNNT_SIMULATE_MANIFEST_H_
#define TSRNNT_SIMULATE_MANIFEST_H_

#include <cstdint>
#include <string>
#include <vector>

namespace tsrnnt {

// One mixture example. Paths are relative to the manifest's directory unless
// absolute. interferer_speaker_id is -1 for single-speaker examples.
struct ManifestRecord {
  std::string id;
  std::string mixture_path;
  std::string enroll_path;
  std::vector<int32_t> transcript;
  int32_t speaker_id = 0;
  double sir_db = 0.0;
  double snr_db = 0.0;
  double overlap = 0.0;
  int32_t interferer_speaker_id = -1;
  std::string interferer_enroll_path;
  std::vector<int32_t> interferer_transcript;

  friend bool operator==(const ManifestRecord &, const ManifestRecord &) = default;
};

using Manifest = std::vector<ManifestRecord>;

// JSON lines, one record per line, keys in a fixed order.
std::string ManifestLine(const ManifestRecord &rec);
ManifestRecord ParseManifestLine(const std::string &line);

void WriteManifest(const Manifest &manifest, const std::string &path);
// Throws ErrorCode::kData on malformed lines or duplicate ids.
Manifest ReadManifest(const std::string &path);

// Resolves a record path against the directory of `manifest_path`.
std::string ResolvePath(const std::string &manifest_path, const std::string &path);

}  // namespace tsrnnt

#endif  // TSRNNT_SIMULATE_MANIFEST_H_
