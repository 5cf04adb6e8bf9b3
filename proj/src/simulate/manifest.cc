// simulate/manifest.cc
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

#include "simulate/manifest.h"

#include <filesystem>
#include <fstream>
#include <set>

#include "base/error.h"
#include "json.hpp"

namespace tsrnnt {

using Json = nlohmann::ordered_json;

std::string ManifestLine(const ManifestRecord &rec) {
  Json j;
  j["id"] = rec.id;
  j["mixture_path"] = rec.mixture_path;
  j["enroll_path"] = rec.enroll_path;
  j["transcript"] = rec.transcript;
  j["speaker_id"] = rec.speaker_id;
  j["sir_db"] = rec.sir_db;
  j["snr_db"] = rec.snr_db;
  j["overlap"] = rec.overlap;
  j["interferer_speaker_id"] = rec.interferer_speaker_id;
  j["interferer_enroll_path"] = rec.interferer_enroll_path;
  j["interferer_transcript"] = rec.interferer_transcript;
  return j.dump();
}

ManifestRecord ParseManifestLine(const std::string &line) {
  try {
    Json j = Json::parse(line);
    ManifestRecord rec;
    rec.id = j.at("id").get<std::string>();
    rec.mixture_path = j.at("mixture_path").get<std::string>();
    rec.enroll_path = j.at("enroll_path").get<std::string>();
    rec.transcript = j.at("transcript").get<std::vector<int32_t>>();
    rec.speaker_id = j.at("speaker_id").get<int32_t>();
    rec.sir_db = j.at("sir_db").get<double>();
    rec.snr_db = j.at("snr_db").get<double>();
    rec.overlap = j.at("overlap").get<double>();
    rec.interferer_speaker_id = j.value("interferer_speaker_id", -1);
    rec.interferer_enroll_path = j.value("interferer_enroll_path", std::string());
    rec.interferer_transcript =
        j.value("interferer_transcript", std::vector<int32_t>());
    return rec;
  } catch (const nlohmann::json::exception &e) {
    TSRNNT_ERR_CODE(ErrorCode::kData) << "bad manifest line: " << e.what();
  }
}

void WriteManifest(const Manifest &manifest, const std::string &path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) TSRNNT_ERR_CODE(ErrorCode::kData) << "cannot write " << path;
  for (const ManifestRecord &rec : manifest) os << ManifestLine(rec) << '\n';
  if (!os) TSRNNT_ERR_CODE(ErrorCode::kData) << "error writing " << path;
}

Manifest ReadManifest(const std::string &path) {
  std::ifstream is(path);
  if (!is) TSRNNT_ERR_CODE(ErrorCode::kData) << "cannot open manifest " << path;
  Manifest manifest;
  std::set<std::string> ids;
  std::string line;
  int64_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      manifest.push_back(ParseManifestLine(line));
    } catch (const Error &e) {
      TSRNNT_ERR_CODE(ErrorCode::kData) << path << ":" << lineno << ": " << e.what();
    }
    if (!ids.insert(manifest.back().id).second) {
      TSRNNT_ERR_CODE(ErrorCode::kData)
          << path << ":" << lineno << ": duplicate id " << manifest.back().id;
    }
  }
  return manifest;
}

std::string ResolvePath(const std::string &manifest_path, const std::string &path) {
  std::filesystem::path p(path);
  if (p.is_absolute()) return path;
  return (std::filesystem::path(manifest_path).parent_path() / p).string();
}

}  // namespace tsrnnt
