// decoding/scorer.h
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

#ifndef TSRNNT_DECODING_SCORER_H_
#define TSRNNT_DECODING_SCORER_H_

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "transducer/model.h"

namespace tsrnnt {

// What the searches see of a transducer: per-frame, per-prefix output
// distributions. Frames may arrive incrementally (streaming); NumFrames() is
// the number available so far.
class TransducerScorer {
 public:
  virtual ~TransducerScorer() = default;
  virtual int32_t NumClasses() const = 0;
  virtual int32_t NumFrames() const = 0;
  // log P(. | t, prefix), NumClasses() entries summing to one.
  virtual void LogProbs(int32_t t, std::span<const int32_t> prefix,
                        std::vector<double> *out) = 0;
};

// Scores with a Model. Prediction-network states are cached per prefix, so a
// hypothesis only pays for the LSTM step of its newest token.
class ModelScorer : public TransducerScorer {
 public:
  explicit ModelScorer(const Model *model);

  // Appends encoder output rows [n x D].
  void AppendFrames(const Tensor &enc);

  int32_t NumClasses() const override { return model_->Config().NumClasses(); }
  int32_t NumFrames() const override { return static_cast<int32_t>(enc_proj_.size()); }
  void LogProbs(int32_t t, std::span<const int32_t> prefix,
                std::vector<double> *out) override;

  size_t NumCachedPrefixes() const { return cache_.size(); }

 private:
  struct Entry {
    PredState state;  // after consuming blank, prefix...
    Tensor pred_proj;  // [1 x J]
  };
  const Entry &Lookup(std::span<const int32_t> prefix);

  const Model *model_;
  std::vector<Tensor> enc_proj_;  // one [1 x J] row per frame
  std::map<std::vector<int32_t>, Entry> cache_;
};

}  // namespace tsrnnt

#endif  // TSRNNT_DECODING_SCORER_H_
