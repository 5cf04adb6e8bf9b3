// decoding/scorer.cc
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

#include "decoding/scorer.h"

#include "base/error.h"

namespace tsrnnt {

ModelScorer::ModelScorer(const Model *model) : model_(model) {}

void ModelScorer::AppendFrames(const Tensor &enc) {
  if (enc.NumRows() == 0) return;
  if (enc.NumCols() != model_->Config().encoder.model_dim) {
    TSRNNT_ERR_CODE(ErrorCode::kShape) << "encoder output " << enc.ShapeString()
                                       << " does not match the model";
  }
  Tape tape(false);
  Tensor proj = model_->JointEncoderProj(tape, tape.Constant(enc)).Value();
  for (int32_t r = 0; r < proj.NumRows(); ++r) {
    Tensor row = Tensor::Matrix(1, proj.NumCols());
    std::copy(proj.Row(r).begin(), proj.Row(r).end(), row.Values().begin());
    enc_proj_.push_back(std::move(row));
  }
}

const ModelScorer::Entry &ModelScorer::Lookup(std::span<const int32_t> prefix) {
  std::vector<int32_t> key(prefix.begin(), prefix.end());
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  PredState prev_state;
  int32_t y_prev = kBlank;
  if (prefix.empty()) {
    prev_state = model_->InitialState();
  } else {
    prev_state = Lookup(prefix.first(prefix.size() - 1)).state;
    y_prev = prefix.back();
  }
  Tape tape(false);
  Entry e;
  Var pred = model_->PredictStep(tape, y_prev, prev_state, &e.state);
  e.pred_proj = model_->JointPredictorProj(tape, pred).Value();
  return cache_.emplace(std::move(key), std::move(e)).first->second;
}

void ModelScorer::LogProbs(int32_t t, std::span<const int32_t> prefix,
                           std::vector<double> *out) {
  if (t < 0 || t >= NumFrames()) {
    TSRNNT_ERR << "frame " << t << " not available (have " << NumFrames() << ")";
  }
  const Entry &e = Lookup(prefix);
  Tape tape(false);
  const int32_t zero[1] = {0};
  Tensor lp = model_->Joint(tape, tape.Constant(enc_proj_[t]), zero,
                            tape.Constant(e.pred_proj), zero).Value();
  out->assign(lp.Values().begin(), lp.Values().end());
}

}  // namespace tsrnnt
