// encoder/streaming-encoder.cc
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

#include "encoder/streaming-encoder.h"

#include <algorithm>

#include "base/error.h"

namespace tsrnnt {

namespace {

int32_t Rows(const Tensor &t) { return t.Empty() ? 0 : t.NumRows(); }

void AppendRows(Tensor *dst, const Tensor &rows) {
  if (Rows(rows) == 0) return;
  if (Rows(*dst) == 0) {
    *dst = rows;
    return;
  }
  std::vector<float> data = dst->Vector();
  data.insert(data.end(), rows.Values().begin(), rows.Values().end());
  *dst = Tensor({dst->NumRows() + rows.NumRows(), dst->NumCols()}, std::move(data));
}

// Rows [begin, end) of a buffer whose first row has global index `base`.
Tensor GlobalRows(const Tensor &buf, int32_t base, int32_t begin, int32_t end) {
  int32_t cols = buf.NumCols();
  int32_t b = begin - base, e = end - base;
  TSRNNT_CHECK(b >= 0 && e <= buf.NumRows() && b <= e);
  return Tensor({e - b, cols}, std::vector<float>(buf.Values().begin() + int64_t(b) * cols,
                                                  buf.Values().begin() + int64_t(e) * cols));
}

// Drops rows below global index `keep_from`.
void TrimFront(Tensor *buf, int32_t *base, int32_t keep_from) {
  int32_t drop = keep_from - *base;
  if (drop <= 0 || Rows(*buf) == 0) return;
  drop = std::min(drop, buf->NumRows());
  *buf = GlobalRows(*buf, *base, *base + drop, *base + buf->NumRows());
  *base += drop;
}

}  // namespace

StreamingEncoder::StreamingEncoder(const ParamSet *params, const std::string &prefix,
                                   const EncoderConfig &cfg, const Tensor *embedding)
    : params_(params), prefix_(prefix), cfg_(cfg), embedding_(embedding) {
  cfg_.Check();
  if (!cfg_.regime.Streaming()) {
    TSRNNT_ERR_CODE(ErrorCode::kUsage) << "streaming encoder needs a causal or chunked regime";
  }
  if (cfg_.TargetSpeaker() != (embedding != nullptr)) {
    TSRNNT_ERR_CODE(ErrorCode::kUsage)
        << (embedding ? "vanilla model given a speaker embedding"
                      : "target-speaker model needs a speaker embedding");
  }
  if (embedding != nullptr && embedding->NumElements() != cfg_.model_dim) {
    TSRNNT_ERR_CODE(ErrorCode::kShape)
        << "speaker embedding has " << embedding->NumElements() << " dims, model has "
        << cfg_.model_dim;
  }
  fuse_after_ = cfg_.FusionAfter();
  caches_.resize(cfg_.num_blocks);
  feat_buf_ = Tensor::Matrix(1, cfg_.input_dim);  // zero frame at index -1
  pool1_buf_ = Tensor::Matrix(1, cfg_.subsample_channels * cfg_.input_dim / 2);
}

void StreamingEncoder::TrackPeak() {
  int32_t rows = std::max({Rows(feat_buf_), Rows(conv1_buf_), Rows(pool1_buf_),
                           Rows(conv2_buf_), Rows(pending_)});
  for (const BlockCache &c : caches_) rows = std::max({rows, Rows(c.keys), Rows(c.conv_tail)});
  peak_rows_ = std::max(peak_rows_, rows);
}

void StreamingEncoder::RunSubsampler(bool final) {
  const int32_t c = cfg_.subsample_channels, f = cfg_.input_dim;
  const ParamSet &ps = *params_;
  Tape tape(false);
  // Stage 1 conv: output row r reads feature rows r-1..r+1.
  int32_t conv1_next = conv1_base_ + Rows(conv1_buf_);
  int32_t last_feat = feat_base_ + Rows(feat_buf_) - 1;
  int32_t conv1_end = last_feat;  // exclusive; row last_feat needs last_feat+1
  if (conv1_end > conv1_next) {
    Var y = tape.Constant(GlobalRows(feat_buf_, feat_base_, conv1_next - 1, conv1_end + 1));
    y = Swish(Conv2d(y, ps(tape, prefix_ + "sub.conv1.w"), ps(tape, prefix_ + "sub.conv1.b"), 1, f));
    AppendRows(&conv1_buf_, y.Value());
  }
  // Stage 1 pool: pooled row p reads conv rows 2p, 2p+1.
  int32_t conv1_total = conv1_base_ + Rows(conv1_buf_);
  int32_t pool1_end = conv1_total / 2;
  if (pool1_end > num_pool1_) {
    Var y = tape.Constant(GlobalRows(conv1_buf_, conv1_base_, 2 * num_pool1_, 2 * pool1_end));
    AppendRows(&pool1_buf_, AvgPool2d(y, c, f).Value());
    num_pool1_ = pool1_end;
  }
  if (final) {
    AppendRows(&pool1_buf_, Tensor::Matrix(1, c * f / 2));  // zero frame at the end
  }
  // Stage 2 conv.
  int32_t conv2_next = conv2_base_ + Rows(conv2_buf_);
  int32_t last_pool1 = pool1_base_ + Rows(pool1_buf_) - 1;
  int32_t conv2_end = std::min(last_pool1, num_pool1_);
  if (conv2_end > conv2_next) {
    Var y = tape.Constant(GlobalRows(pool1_buf_, pool1_base_, conv2_next - 1, conv2_end + 1));
    y = Swish(Conv2d(y, ps(tape, prefix_ + "sub.conv2.w"), ps(tape, prefix_ + "sub.conv2.b"), c,
                     f / 2));
    AppendRows(&conv2_buf_, y.Value());
  }
  // Stage 2 pool, projection and positions.
  int32_t conv2_total = conv2_base_ + Rows(conv2_buf_);
  int32_t sub_end = conv2_total / 2;
  if (sub_end > num_sub_) {
    Var y = tape.Constant(GlobalRows(conv2_buf_, conv2_base_, 2 * num_sub_, 2 * sub_end));
    y = AvgPool2d(y, c, f / 2);
    y = Add(MatMul(y, ps(tape, prefix_ + "sub.out.w")), ps(tape, prefix_ + "sub.out.b"));
    y = Add(y, tape.Constant(SinusoidalPositions(num_sub_, sub_end - num_sub_, cfg_.model_dim)));
    AppendRows(&pending_, y.Value());
    num_sub_ = sub_end;
  }
  TrackPeak();
  TrimFront(&feat_buf_, &feat_base_, (conv1_base_ + Rows(conv1_buf_)) - 1);
  TrimFront(&conv1_buf_, &conv1_base_, 2 * num_pool1_);
  TrimFront(&pool1_buf_, &pool1_base_, (conv2_base_ + Rows(conv2_buf_)) - 1);
  TrimFront(&conv2_buf_, &conv2_base_, 2 * num_sub_);
}

Tensor StreamingEncoder::RunBlocks(const Tensor &frames) {
  Tape tape(false);
  Var x = tape.Constant(frames);
  Var emb;
  if (embedding_ != nullptr) {
    emb = tape.Constant(Tensor({1, cfg_.model_dim}, embedding_->Vector()));
  }
  for (int32_t b = 0; b < cfg_.num_blocks; ++b) {
    x = ConformerBlock(tape, *params_, prefix_ + "block" + std::to_string(b) + ".", cfg_, x,
                       frames_out_, &caches_[b]);
    if (fuse_after_[b]) x = Fuse(x, emb);
  }
  frames_out_ += frames.NumRows();
  TrackPeak();
  return x.Value();
}

Tensor StreamingEncoder::Drain(bool final) {
  int32_t ready = Rows(pending_);
  if (cfg_.regime.kind == MaskRegime::Kind::kChunked && !final) {
    // Only whole chunks; chunks are aligned to absolute frame indices.
    int32_t end = ((frames_out_ + ready) / cfg_.regime.chunk) * cfg_.regime.chunk;
    ready = std::max(0, end - frames_out_);
  }
  if (ready == 0) return Tensor::Matrix(0, cfg_.model_dim);
  Tensor now = GlobalRows(pending_, 0, 0, ready);
  pending_ = GlobalRows(pending_, 0, ready, Rows(pending_));
  return RunBlocks(now);
}

Tensor StreamingEncoder::Accept(const Tensor &feats) {
  if (finalized_) TSRNNT_ERR_CODE(ErrorCode::kUsage) << "streaming encoder already finalized";
  if (Rows(feats) > 0) {
    if (feats.NumCols() != cfg_.input_dim) {
      TSRNNT_ERR_CODE(ErrorCode::kShape) << "expected " << cfg_.input_dim << "-dim features";
    }
    AppendRows(&feat_buf_, feats);
    num_feats_ += feats.NumRows();
  }
  RunSubsampler(false);
  return Drain(false);
}

Tensor StreamingEncoder::Finalize() {
  if (finalized_) TSRNNT_ERR_CODE(ErrorCode::kUsage) << "streaming encoder already finalized";
  finalized_ = true;
  if (num_feats_ == 0) return Tensor::Matrix(0, cfg_.model_dim);
  AppendRows(&feat_buf_, Tensor::Matrix(1, cfg_.input_dim));  // zero frame at the end
  RunSubsampler(true);
  return Drain(true);
}

}  // namespace tsrnnt
