// cli/dataset.cc
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

#include "cli/dataset.h"

#include <cmath>

#include "base/error.h"

namespace tsrnnt {

const Tensor &Dataset::Enrollment(const std::string &key) const {
  auto it = enrollments.find(key);
  if (it == enrollments.end()) TSRNNT_ERR_CODE(ErrorCode::kData) << "no enrollment " << key;
  return it->second;
}

int64_t Dataset::NumFrames() const {
  int64_t n = 0;
  for (const Example &e : examples) n += e.feats.NumRows();
  return n;
}

Dataset LoadDataset(const std::vector<std::string> &manifest_paths, const Fbank &fbank,
                    bool with_enrollments) {
  Dataset data;
  auto load_enroll = [&](const std::string &path) {
    if (!data.enrollments.count(path)) {
      data.enrollments[path] = fbank.Compute(ReadWave(path)).frames;
    }
  };
  for (const std::string &mpath : manifest_paths) {
    for (ManifestRecord &rec : ReadManifest(mpath)) {
      Example ex;
      ex.feats = fbank.Compute(ReadWave(ResolvePath(mpath, rec.mixture_path))).frames;
      if (with_enrollments) {
        if (rec.enroll_path.empty()) {
          TSRNNT_ERR_CODE(ErrorCode::kData) << "record " << rec.id << " has no enrollment";
        }
        ex.enroll_key = ResolvePath(mpath, rec.enroll_path);
        load_enroll(ex.enroll_key);
        if (!rec.interferer_enroll_path.empty()) {
          ex.interferer_enroll_key = ResolvePath(mpath, rec.interferer_enroll_path);
          load_enroll(ex.interferer_enroll_key);
        }
      }
      ex.record = std::move(rec);
      data.examples.push_back(std::move(ex));
    }
  }
  return data;
}

void FeatureStats(const Dataset &data, Tensor *mean, Tensor *inv_std) {
  if (data.examples.empty()) TSRNNT_ERR_CODE(ErrorCode::kData) << "no data for feature stats";
  const int32_t dim = data.examples[0].feats.NumCols();
  std::vector<double> sum(dim), sq(dim);
  int64_t n = 0;
  for (const Example &e : data.examples) {
    for (int32_t r = 0; r < e.feats.NumRows(); ++r) {
      for (int32_t d = 0; d < dim; ++d) {
        double v = e.feats(r, d);
        sum[d] += v;
        sq[d] += v * v;
      }
    }
    n += e.feats.NumRows();
  }
  *mean = Tensor({dim});
  *inv_std = Tensor({dim});
  for (int32_t d = 0; d < dim; ++d) {
    double m = sum[d] / n;
    double var = std::max(sq[d] / n - m * m, 1e-8);
    (*mean)[d] = static_cast<float>(m);
    (*inv_std)[d] = static_cast<float>(1.0 / std::sqrt(var));
  }
}

}  // namespace tsrnnt
